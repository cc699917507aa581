#pragma once

#include <array>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace ergotor::detail {

// Nodes on [-1, 1] and weights of the 10-point Gauss-Legendre rule.
struct PanelRule {
  static constexpr std::size_t kOrder = 10;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  PanelRule() {
    using Rule = boost::math::quadrature::gauss<double, kOrder>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      nodes[k] = -x[i];
      weights[k++] = w[i];
      nodes[k] = x[i];
      weights[k++] = w[i];
    }
  }
};

inline const PanelRule& panel_rule() {
  static const PanelRule rule;
  return rule;
}

}  // namespace ergotor::detail
