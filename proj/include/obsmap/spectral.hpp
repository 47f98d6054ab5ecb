#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "obsmap/graph.hpp"

namespace obsmap {

using SparseOperator = Eigen::SparseMatrix<double, Eigen::ColMajor, std::int64_t>;

// I - D^{-1/2} A D^{-1/2}. Throws ParameterError on an isolated vertex.
SparseOperator normalized_laplacian(const Graph& g);

enum class EigenMethod { automatic, dense, lanczos };

// Above this order the automatic method switches to Lanczos.
inline constexpr Eigen::Index kDenseEigenLimit = 600;

struct SpectralBasis {
  // Ascending; eigenvalues[0] is the trivial zero eigenvalue.
  Eigen::VectorXd eigenvalues;
  // Unit columns aligned with eigenvalues.
  Eigen::MatrixXd vectors;
  // First eigenvalue above the retained block, when the solver produced it.
  std::optional<double> next_eigenvalue;
  // Some retained nontrivial eigenvalue shares (up to tolerance) its value
  // with a neighbor, so the per-coordinate energies depend on the basis
  // picked inside that eigenspace.
  bool degenerate = false;
  double max_residual = 0;

  Eigen::Index nontrivial_count() const noexcept { return eigenvalues.size() - 1; }
};

// Smallest m+1 eigenpairs of a symmetric operator. Each vector is signed so
// that its first entry with magnitude above 1e-12 is positive.
SpectralBasis low_frequency_basis(const SparseOperator& op, int m, double degeneracy_tol = 1e-9,
                                  EigenMethod method = EigenMethod::automatic);

// Squared entries of the first m nontrivial eigenvectors, n x m.
struct EnergyEmbedding {
  Eigen::MatrixXd values;
  bool scaled = false;  // true: multiplied by n
};

EnergyEmbedding energy_embedding(const SpectralBasis& basis, int m, bool scaled);

enum class Quantizer { absolute, relative };

std::string_view to_string(Quantizer q) noexcept;
Quantizer parse_quantizer(std::string_view text);

// Integer bin indices, row-major n x m.
class QuantizedCodes {
 public:
  QuantizedCodes() = default;
  QuantizedCodes(Eigen::Index n, Eigen::Index m, std::vector<std::int64_t> codes, Quantizer rule,
                 double eta, double delta);

  // Codes with no spectral coordinates: every vertex gets the empty tuple.
  static QuantizedCodes empty(Eigen::Index n);

  Eigen::Index n() const noexcept { return n_; }
  Eigen::Index m() const noexcept { return m_; }
  Quantizer rule() const noexcept { return rule_; }
  double eta() const noexcept { return eta_; }
  double delta() const noexcept { return delta_; }

  std::span<const std::int64_t> row(Eigen::Index v) const noexcept {
    return {codes_.data() + v * m_, static_cast<std::size_t>(m_)};
  }
  const std::vector<std::int64_t>& data() const noexcept { return codes_; }

  // Representative value delta * index for coordinate (v, j).
  double representative(Eigen::Index v, Eigen::Index j) const noexcept {
    return delta_ * static_cast<double>(codes_[v * m_ + j]);
  }

 private:
  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
  std::vector<std::int64_t> codes_;
  Quantizer rule_ = Quantizer::absolute;
  double eta_ = 0;
  double delta_ = 0;
};

// code = floor(x / eta).
QuantizedCodes quantize_absolute(const EnergyEmbedding& emb, double eta);

// delta = eta * max|x|, code = round(x / delta) with ties away from zero.
QuantizedCodes quantize_relative(const EnergyEmbedding& emb, double eta);

QuantizedCodes quantize(const EnergyEmbedding& emb, Quantizer rule, double eta);

// Number of distinct code rows.
std::size_t codebook_size(const QuantizedCodes& codes);

// Tab-separated (vertex, index, value) dumps.
void write_basis_tsv(const SpectralBasis& basis, std::ostream& out);
void write_embedding_tsv(const EnergyEmbedding& emb, std::ostream& out);

}  // namespace obsmap
