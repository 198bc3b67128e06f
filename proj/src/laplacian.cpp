#include "treefac/error.hpp"
#include "treefac/flow.hpp"

namespace treefac {

// Vertices other than the shorted leaves are unknowns; the shorted leaves
// are one grounded vertex s with F(s) = 0. The system
//   sum_w c(v,w) (F(w) - F(v)) = [v == root]
// is solved by Gaussian elimination over the rationals.
Rational laplacian_H_finite(const RootedTree& tree) {
  const std::size_t n = tree.size();
  std::vector<long> index(n, -1);
  std::size_t unknowns = 0;
  bool grounded = false;
  for (NodeId v = 0; v < n; ++v) {
    const auto cap = tree.capacity(v);
    if (cap && cap->is_infinite()) {
      grounded = true;
    } else {
      index[v] = static_cast<long>(unknowns++);
    }
  }
  if (!grounded) throw AllOpenCircuit("no leaf of capacity infinity: the root is not connected to the boundary");
  if (index[kRoot] < 0) return 0;  // the root itself is shorted

  std::vector<std::vector<Rational>> a(unknowns, std::vector<Rational>(unknowns + 1, Rational(0)));
  for (NodeId v = 1; v < n; ++v) {
    const NodeId u = *tree.parent(v);
    const Rational c = 1 / tree.length(v);
    const long iu = index[u];
    const long iv = index[v];
    if (iu >= 0) {
      a[iu][iu] -= c;
      if (iv >= 0) a[iu][iv] += c;
    }
    if (iv >= 0) {
      a[iv][iv] -= c;
      if (iu >= 0) a[iv][iu] += c;
    }
  }
  a[index[kRoot]][unknowns] = 1;

  for (std::size_t col = 0; col < unknowns; ++col) {
    std::size_t pivot = col;
    while (pivot < unknowns && a[pivot][col] == 0) ++pivot;
    if (pivot == unknowns) {
      // Every vertex reaches s through the tree, so this is unreachable.
      throw std::logic_error("singular Laplacian");
    }
    std::swap(a[pivot], a[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j <= unknowns; ++j) a[col][j] *= inv;
    for (std::size_t i = 0; i < unknowns; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const Rational factor = a[i][col];
      for (std::size_t j = col; j <= unknowns; ++j) {
        if (a[col][j] != 0) a[i][j] -= factor * a[col][j];
      }
    }
  }
  return -a[index[kRoot]][unknowns];
}

}  // namespace treefac
