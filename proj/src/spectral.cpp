#include "obsmap/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "obsmap/errors.hpp"
#include "obsmap/rng.hpp"

namespace obsmap {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr double kRitzEstimateTol = 1e-10;
constexpr double kSignZeroTol = 1e-12;
constexpr std::uint64_t kLanczosStartSeed = 0x4c414e43'5a4f5331ULL;

double max_residual(const SparseOperator& op, const Eigen::VectorXd& values,
                    const Eigen::MatrixXd& vectors) {
  double worst = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Eigen::VectorXd r = op * vectors.col(i) - values(i) * vectors.col(i);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

void canonicalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double x = vectors(i, j);
      if (std::abs(x) > kSignZeroTol) {
        if (x < 0) vectors.col(j) *= -1.0;
        break;
      }
    }
  }
}

struct Eigenpairs {
  Eigen::VectorXd values;   // smallest `wanted`, ascending
  Eigen::MatrixXd vectors;  // n x wanted
};

Eigenpairs dense_smallest(const SparseOperator& op, Eigen::Index wanted) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NumericError("dense symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues().head(wanted), solver.eigenvectors().leftCols(wanted)};
}

void random_unit(Rng& rng, Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 2.0 * rng.uniform01() - 1.0;
  v.normalize();
}

// Lanczos with full (two-pass) reorthogonalization. The Krylov basis grows
// until the Ritz residual estimates of the `wanted` smallest pairs fall below
// kRitzEstimateTol and the explicit residuals confirm kResidualTol. Hitting
// an invariant subspace restarts from a fresh vector orthogonal to the basis.
// A single start vector sees one direction per eigenspace, so exactly
// repeated eigenvalues are only recovered through such restarts.
Eigenpairs lanczos_smallest(const SparseOperator& op, Eigen::Index wanted) {
  const Eigen::Index n = op.rows();
  Rng rng(kLanczosStartSeed);

  Eigen::Index capacity = std::min<Eigen::Index>(n, std::max<Eigen::Index>(64, 4 * wanted));
  Eigen::MatrixXd basis(n, capacity);
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis columns j and j+1

  Eigen::VectorXd q(n);
  random_unit(rng, q);
  Eigen::VectorXd w(n);
  double last_estimate = 0;

  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == capacity) {
      capacity = std::min<Eigen::Index>(n, 2 * capacity);
      basis.conservativeResize(Eigen::NoChange, capacity);
    }
    basis.col(j) = q;
    w.noalias() = op * q;
    const double a = q.dot(w);
    w -= a * q;
    if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd h = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * h;
    }
    alpha.push_back(a);
    double b = w.norm();
    const Eigen::Index steps = j + 1;
    const bool breakdown = b < 1e-10;
    if (breakdown) b = 0;

    const bool exhausted = steps == n;
    if (steps >= wanted && (steps % 10 == 0 || exhausted)) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), steps);
      Eigen::VectorXd sub(std::max<Eigen::Index>(steps - 1, 0));
      for (Eigen::Index i = 0; i + 1 < steps; ++i) sub(i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      if (tri.info() != Eigen::Success) {
        throw NumericError("tridiagonal eigensolver did not converge");
      }
      double estimate = 0;
      for (Eigen::Index i = 0; i < wanted; ++i) {
        estimate = std::max(estimate, std::abs(b * tri.eigenvectors()(steps - 1, i)));
      }
      last_estimate = estimate;
      if (estimate <= kRitzEstimateTol || exhausted) {
        Eigenpairs out;
        out.values = tri.eigenvalues().head(wanted);
        out.vectors = basis.leftCols(steps) * tri.eigenvectors().leftCols(wanted);
        for (Eigen::Index i = 0; i < wanted; ++i) out.vectors.col(i).normalize();
        const double residual = max_residual(op, out.values, out.vectors);
        if (residual <= kResidualTol) return out;
        if (exhausted) {
          throw NumericError("Lanczos did not converge: residual " + std::to_string(residual));
        }
      }
    }
    if (exhausted) break;

    if (breakdown) {
      // Invariant subspace: continue from a fresh orthogonal direction.
      beta.push_back(0.0);
      random_unit(rng, q);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd h = basis.leftCols(steps).transpose() * q;
        q.noalias() -= basis.leftCols(steps) * h;
      }
      q.normalize();
    } else {
      beta.push_back(b);
      q = w / b;
    }
  }
  throw NumericError("Lanczos did not converge: Ritz estimate " + std::to_string(last_estimate));
}

}  // namespace

SparseOperator normalized_laplacian(const Graph& g) {
  const VertexId n = g.n();
  std::vector<double> inv_sqrt(static_cast<std::size_t>(n));
  for (VertexId v = 0; v < n; ++v) {
    if (g.degree(v) == 0) {
      throw ParameterError("normalized_laplacian: vertex " + std::to_string(v) + " is isolated");
    }
    inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  }
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) + 2 * g.edge_count());
  for (VertexId v = 0; v < n; ++v) {
    triplets.emplace_back(v, v, 1.0);
    for (VertexId u : g.neighbors(v)) triplets.emplace_back(v, u, -inv_sqrt[v] * inv_sqrt[u]);
  }
  SparseOperator op(n, n);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SpectralBasis low_frequency_basis(const SparseOperator& op, int m, double degeneracy_tol,
                                  EigenMethod method) {
  const Eigen::Index n = op.rows();
  if (op.cols() != n) throw ParameterError("operator must be square");
  if (m < 0) throw ParameterError("spectral dimension must be non-negative");
  if (static_cast<Eigen::Index>(m) + 1 > n) {
    throw ParameterError("need m + 1 <= n eigenpairs (m = " + std::to_string(m) + ", n = " +
                         std::to_string(n) + ")");
  }
  const Eigen::Index retained = m + 1;
  // One extra pair exposes a degenerate boundary with the discarded spectrum.
  const Eigen::Index wanted = std::min<Eigen::Index>(retained + 1, n);

  if (method == EigenMethod::automatic) {
    method = n <= kDenseEigenLimit ? EigenMethod::dense : EigenMethod::lanczos;
  }
  Eigenpairs pairs =
      method == EigenMethod::dense ? dense_smallest(op, wanted) : lanczos_smallest(op, wanted);

  SpectralBasis basis;
  basis.eigenvalues = pairs.values.head(retained);
  basis.vectors = pairs.vectors.leftCols(retained);
  if (wanted > retained) basis.next_eigenvalue = pairs.values(retained);
  canonicalize_signs(basis.vectors);
  basis.max_residual = max_residual(op, basis.eigenvalues, basis.vectors);
  if (basis.max_residual > kResidualTol) {
    throw NumericError("eigen-residual " + std::to_string(basis.max_residual) +
                       " exceeds tolerance");
  }

  auto close = [degeneracy_tol](double a, double b) {
    return std::abs(b - a) < degeneracy_tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  for (Eigen::Index i = 1; i + 1 < retained; ++i) {
    if (close(basis.eigenvalues(i), basis.eigenvalues(i + 1))) basis.degenerate = true;
  }
  if (retained > 1 && basis.next_eigenvalue &&
      close(basis.eigenvalues(retained - 1), *basis.next_eigenvalue)) {
    basis.degenerate = true;
  }
  return basis;
}

EnergyEmbedding energy_embedding(const SpectralBasis& basis, int m, bool scaled) {
  if (m < 0 || m > basis.nontrivial_count()) {
    throw ParameterError("energy_embedding: basis holds " +
                         std::to_string(basis.nontrivial_count()) +
                         " nontrivial vectors, asked for " + std::to_string(m));
  }
  EnergyEmbedding emb;
  emb.scaled = scaled;
  emb.values = basis.vectors.middleCols(1, m).array().square().matrix();
  if (scaled) emb.values *= static_cast<double>(basis.vectors.rows());
  return emb;
}

std::string_view to_string(Quantizer q) noexcept {
  return q == Quantizer::absolute ? "absolute" : "relative";
}

Quantizer parse_quantizer(std::string_view text) {
  if (text == "absolute") return Quantizer::absolute;
  if (text == "relative") return Quantizer::relative;
  throw ParameterError("unknown quantizer: " + std::string(text));
}

QuantizedCodes::QuantizedCodes(Eigen::Index n, Eigen::Index m, std::vector<std::int64_t> codes,
                               Quantizer rule, double eta, double delta)
    : n_(n), m_(m), codes_(std::move(codes)), rule_(rule), eta_(eta), delta_(delta) {
  if (n < 0 || m < 0 || static_cast<std::size_t>(n * m) != codes_.size()) {
    throw ParameterError("QuantizedCodes: code buffer does not match n x m");
  }
}

QuantizedCodes QuantizedCodes::empty(Eigen::Index n) {
  return QuantizedCodes(n, 0, {}, Quantizer::absolute, 0.0, 0.0);
}

namespace {

template <typename BinFn>
std::vector<std::int64_t> bin_all(const Eigen::MatrixXd& values, BinFn bin) {
  const Eigen::Index n = values.rows();
  const Eigen::Index m = values.cols();
  std::vector<std::int64_t> codes(static_cast<std::size_t>(n * m));
  for (Eigen::Index v = 0; v < n; ++v) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double scaled = bin(values(v, j));
      if (!std::isfinite(scaled) || std::abs(scaled) > 0x1.0p62) {
        throw NumericError("quantization index out of range");
      }
      codes[static_cast<std::size_t>(v * m + j)] = static_cast<std::int64_t>(scaled);
    }
  }
  return codes;
}

}  // namespace

QuantizedCodes quantize_absolute(const EnergyEmbedding& emb, double eta) {
  if (!(eta > 0) || !std::isfinite(eta)) throw ParameterError("eta must be positive");
  auto codes = bin_all(emb.values, [eta](double x) { return std::floor(x / eta); });
  return QuantizedCodes(emb.values.rows(), emb.values.cols(), std::move(codes),
                        Quantizer::absolute, eta, eta);
}

QuantizedCodes quantize_relative(const EnergyEmbedding& emb, double eta) {
  if (!(eta > 0) || !std::isfinite(eta)) throw ParameterError("eta must be positive");
  const Eigen::Index n = emb.values.rows();
  const Eigen::Index m = emb.values.cols();
  const double peak = m == 0 || n == 0 ? 0.0 : emb.values.cwiseAbs().maxCoeff();
  if (peak == 0) {
    return QuantizedCodes(n, m, std::vector<std::int64_t>(static_cast<std::size_t>(n * m), 0),
                          Quantizer::relative, eta, 0.0);
  }
  const double delta = eta * peak;
  // std::round rounds halfway cases away from zero.
  auto codes = bin_all(emb.values, [delta](double x) { return std::round(x / delta); });
  return QuantizedCodes(n, m, std::move(codes), Quantizer::relative, eta, delta);
}

QuantizedCodes quantize(const EnergyEmbedding& emb, Quantizer rule, double eta) {
  return rule == Quantizer::absolute ? quantize_absolute(emb, eta) : quantize_relative(emb, eta);
}

std::size_t codebook_size(const QuantizedCodes& codes) {
  const Eigen::Index n = codes.n();
  if (n == 0) return 0;
  if (codes.m() == 0) return 1;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    const auto ra = codes.row(a);
    const auto rb = codes.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (less(order[i - 1], order[i])) ++distinct;
  }
  return distinct;
}

void write_basis_tsv(const SpectralBasis& basis, std::ostream& out) {
  out.precision(17);
  out << "vertex\tindex\teigenvalue\tvalue\n";
  for (Eigen::Index v = 0; v < basis.vectors.rows(); ++v) {
    for (Eigen::Index j = 0; j < basis.vectors.cols(); ++j) {
      out << v << '\t' << j << '\t' << basis.eigenvalues(j) << '\t' << basis.vectors(v, j) << '\n';
    }
  }
  if (!out) throw IoError("failed to write basis dump");
}

void write_embedding_tsv(const EnergyEmbedding& emb, std::ostream& out) {
  out.precision(17);
  out << "vertex\tindex\tvalue\n";
  for (Eigen::Index v = 0; v < emb.values.rows(); ++v) {
    for (Eigen::Index j = 0; j < emb.values.cols(); ++j) {
      out << v << '\t' << j + 1 << '\t' << emb.values(v, j) << '\n';
    }
  }
  if (!out) throw IoError("failed to write embedding dump");
}

}  // namespace obsmap
