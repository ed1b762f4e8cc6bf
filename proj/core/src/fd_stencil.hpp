#pragma once

#include <array>
#include <utility>
#include <vector>

namespace twave::detail {

/// Tensor-product central difference for a mixed partial derivative in D variables.
/// Offsets are in units of the step h; the derivative is sum w f(x + off h) / h^{|order|}.
template <int D>
struct Stencil {
  std::array<int, D> order{};
  std::vector<std::pair<std::array<double, D>, double>> taps;

  int total() const {
    int s = 0;
    for (int o : order) s += o;
    return s;
  }
};

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <int D>
Stencil<D> make_stencil(const std::array<int, D>& order) {
  Stencil<D> s;
  s.order = order;
  s.taps.push_back({std::array<double, D>{}, 1.0});
  for (int d = 0; d < D; ++d) {
    const int n = order[d];
    if (n == 0) continue;
    std::vector<std::pair<std::array<double, D>, double>> next;
    for (const auto& [off, w] : s.taps)
      for (int j = 0; j <= n; ++j) {
        auto o = off;
        o[d] += 0.5 * n - j;
        next.push_back({o, w * ((j % 2) ? -1.0 : 1.0) * binomial(n, j)});
      }
    s.taps = std::move(next);
  }
  return s;
}

/// All multi-indices with total order <= max_total, in lexicographic order.
template <int D>
std::vector<Stencil<D>> stencils_up_to(int max_total) {
  std::vector<Stencil<D>> out;
  std::array<int, D> g{};
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == D) {
      out.push_back(make_stencil<D>(g));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      g[var] = v;
      self(self, var + 1, remaining - v);
    }
    g[var] = 0;
  };
  rec(rec, 0, max_total);
  return out;
}

}  // namespace twave::detail
