#include "discrete.hpp"

namespace hexnls::detail {

namespace {

void add_stiffness_triplets(const GraphFunction& layout, double scale, const std::vector<char>* fixed,
                            std::vector<Eigen::Triplet<double>>& out) {
  const MetricGraph& g = layout.graph();
  const int n = layout.samples_per_edge();
  const auto is_fixed = [&](int i) { return fixed != nullptr && (*fixed)[static_cast<std::size_t>(i)] != 0; };
  for (const Edge& e : g.edges()) {
    const double c = scale / layout.spacing(e.id);
    for (int k = 0; k + 1 < n; ++k) {
      const int a = layout.dof_index(e.id, k);
      const int b = layout.dof_index(e.id, k + 1);
      const bool fa = is_fixed(a);
      const bool fb = is_fixed(b);
      if (!fa) out.emplace_back(a, a, c);
      if (!fb) out.emplace_back(b, b, c);
      if (!fa && !fb) {
        out.emplace_back(a, b, -c);
        out.emplace_back(b, a, -c);
      }
    }
  }
}

}  // namespace

SparseMatrix assemble_stiffness(const GraphFunction& layout) {
  std::vector<Eigen::Triplet<double>> triplets;
  add_stiffness_triplets(layout, 1.0, nullptr, triplets);
  SparseMatrix k(layout.num_dofs(), layout.num_dofs());
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

SparseMatrix assemble_system(const GraphFunction& layout, const std::vector<double>& weights, double tau,
                             const std::vector<char>& fixed) {
  std::vector<Eigen::Triplet<double>> triplets;
  add_stiffness_triplets(layout, tau, &fixed, triplets);
  for (int i = 0; i < layout.num_dofs(); ++i) {
    triplets.emplace_back(i, i, fixed[static_cast<std::size_t>(i)] ? 1.0 : weights[static_cast<std::size_t>(i)]);
  }
  SparseMatrix a(layout.num_dofs(), layout.num_dofs());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

}  // namespace hexnls::detail
