#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace hypack::quadrature {

inline constexpr unsigned gauss_order = 16;

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Appends an `panels`-panel composite Gauss-Legendre rule on [a, b].
inline void append_composite(Rule& rule, double a, double b, std::size_t panels) {
    using gauss = boost::math::quadrature::gauss<double, gauss_order>;
    const auto& x = gauss::abscissa();
    const auto& w = gauss::weights();
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double mid = lo + 0.5 * width;
        const double half = 0.5 * width;
        // boost stores the non-negative half of a symmetric rule; x[0] == 0 for even order is absent.
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                rule.nodes.push_back(mid);
                rule.weights.push_back(half * w[i]);
                continue;
            }
            rule.nodes.push_back(mid - half * x[i]);
            rule.weights.push_back(half * w[i]);
            rule.nodes.push_back(mid + half * x[i]);
            rule.weights.push_back(half * w[i]);
        }
    }
}

inline Rule composite(double a, double b, std::size_t panels) {
    Rule rule;
    append_composite(rule, a, b, panels);
    return rule;
}

template <class F>
double integrate(F&& f, double a, double b, std::size_t panels) {
    const Rule rule = composite(a, b, panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
    return sum;
}

}  // namespace hypack::quadrature
