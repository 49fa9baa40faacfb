#include "repeaterpgf/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rpgf {
namespace {

using cd = std::complex<double>;

int qubit_count(std::size_t dim) {
  int q = 0;
  std::size_t d = dim;
  while (d > 1 && d % 2 == 0) {
    d /= 2;
    ++q;
  }
  if (d != 1 || q == 0) {
    throw std::invalid_argument("DensityMatrix: dimension must be a power of two >= 2");
  }
  return q;
}

void check_qubit(const DensityMatrix& rho, int qubit) {
  if (qubit < 0 || qubit >= rho.qubits()) {
    throw std::invalid_argument("quantum_state: qubit index out of range");
  }
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0) || x > 1.0) {
    throw std::domain_error(std::string("quantum_state: ") + what + " must be in [0, 1]");
  }
}

// Scales every entry whose row/column parities on `qubit` differ; factor 1
// keeps the matrix, factor -1 is exact Z-conjugation, e^-alpha is dephasing.
DensityMatrix scale_off_parity(const DensityMatrix& rho, int qubit, double factor) {
  check_qubit(rho, qubit);
  const std::size_t bit = std::size_t{1} << (rho.qubits() - 1 - qubit);
  DensityMatrix out = rho;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      if (((i ^ j) & bit) != 0) out.at(i, j) *= factor;
    }
  }
  return out;
}

// 4x4 submatrix of a 16x16 matrix with separate 1-based row/column index sets.
DensityMatrix submatrix(const DensityMatrix& rho, const int (&rows)[4], const int (&cols)[4]) {
  DensityMatrix out(4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out.at(i, j) = rho.at(static_cast<std::size_t>(rows[i] - 1),
                            static_cast<std::size_t>(cols[j] - 1));
    }
  }
  return out;
}

void add_scaled(DensityMatrix& acc, const DensityMatrix& m, double factor) {
  for (std::size_t i = 0; i < acc.dim(); ++i) {
    for (std::size_t j = 0; j < acc.dim(); ++j) acc.at(i, j) += factor * m.at(i, j);
  }
}

}  // namespace

DensityMatrix::DensityMatrix(std::size_t dim)
    : dim_(dim), qubits_(qubit_count(dim)), a_(dim * dim, cd(0.0, 0.0)) {}

DensityMatrix DensityMatrix::identity(std::size_t dim) {
  DensityMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

cd& DensityMatrix::at(std::size_t row, std::size_t col) { return a_[row * dim_ + col]; }

const cd& DensityMatrix::at(std::size_t row, std::size_t col) const {
  return a_[row * dim_ + col];
}

DensityMatrix DensityMatrix::kron(const DensityMatrix& other) const {
  DensityMatrix out(dim_ * other.dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      for (std::size_t k = 0; k < other.dim_; ++k) {
        for (std::size_t l = 0; l < other.dim_; ++l) {
          out.at(i * other.dim_ + k, j * other.dim_ + l) = at(i, j) * other.at(k, l);
        }
      }
    }
  }
  return out;
}

cd DensityMatrix::trace() const {
  cd t(0.0, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

bool DensityMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    }
  }
  return true;
}

double DensityMatrix::min_eigenvalue() const {
  // Real-symmetric embedding [[Re, -Im], [Im, Re]] doubles each eigenvalue's
  // multiplicity and keeps the spectrum; cyclic Jacobi then diagonalizes it.
  const std::size_t n = 2 * dim_;
  std::vector<double> b(n * n, 0.0);
  const auto idx = [n](std::size_t r, std::size_t c) { return r * n + c; };
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const double re = at(i, j).real();
      const double im = at(i, j).imag();
      b[idx(i, j)] = re;
      b[idx(i + dim_, j + dim_)] = re;
      b[idx(i, j + dim_)] = -im;
      b[idx(i + dim_, j)] = im;
    }
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(b[idx(i, i)]));
  scale = std::max(scale, 1.0);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(b[idx(p, q)]);
    }
    if (off < 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = b[idx(p, q)];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (b[idx(q, q)] - b[idx(p, p)]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double bkp = b[idx(k, p)];
          const double bkq = b[idx(k, q)];
          b[idx(k, p)] = c * bkp - s * bkq;
          b[idx(k, q)] = s * bkp + c * bkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double bpk = b[idx(p, k)];
          const double bqk = b[idx(q, k)];
          b[idx(p, k)] = c * bpk - s * bqk;
          b[idx(q, k)] = s * bpk + c * bqk;
        }
      }
    }
  }
  double mn = b[idx(0, 0)];
  for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, b[idx(i, i)]);
  return mn;
}

std::string DensityMatrix::to_text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (j) os << " ";
      os << at(i, j).real();
      const double im = at(i, j).imag();
      os << (im < 0.0 ? "-" : "+") << std::abs(im) << "i";
    }
    os << "\n";
  }
  return os.str();
}

bool approx_equal(const DensityMatrix& a, const DensityMatrix& b, double tol) {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t i = 0; i < a.a_.size(); ++i) {
    if (std::abs(a.a_[i] - b.a_[i]) > tol) return false;
  }
  return true;
}

DensityMatrix realize(const BellDiagonalState& state) {
  check_unit(state.F, "F");
  check_unit(state.mu, "mu");
  DensityMatrix m(4);
  const double mu = state.mu;
  m.at(0, 0) = (1.0 - mu) / 4.0;
  m.at(3, 3) = (1.0 - mu) / 4.0;
  m.at(1, 1) = (1.0 + mu) / 4.0;
  m.at(2, 2) = (1.0 + mu) / 4.0;
  m.at(1, 2) = 2.0 * mu * (2.0 * state.F - 1.0) / 4.0;
  m.at(2, 1) = m.at(1, 2);
  return m;
}

DensityMatrix dephase(const DensityMatrix& rho, double alpha, int qubit) {
  if (!(alpha >= 0.0)) throw std::domain_error("quantum_state: alpha must be >= 0");
  return scale_off_parity(rho, qubit, std::exp(-alpha));
}

DensityMatrix dephase_lambda(const DensityMatrix& rho, double lambda, int qubit) {
  if (!(lambda >= 0.0) || lambda >= 0.5) {
    throw std::domain_error("quantum_state: lambda must be in [0, 1/2)");
  }
  // 1 - 2 lambda = e^-alpha.
  return scale_off_parity(rho, qubit, 1.0 - 2.0 * lambda);
}

BellDiagonalState dephase(const BellDiagonalState& state, double alpha) {
  if (!(alpha >= 0.0)) throw std::domain_error("quantum_state: alpha must be >= 0");
  check_unit(state.F, "F");
  BellDiagonalState out = state;
  out.F = (2.0 * state.F - 1.0) * std::exp(-alpha) / 2.0 + 0.5;
  return out;
}

DensityMatrix pauli_z_conjugate(const DensityMatrix& rho, int qubit) {
  return scale_off_parity(rho, qubit, -1.0);
}

DensityMatrix depolarize2(const DensityMatrix& rho, double mu) {
  check_unit(mu, "mu");
  if (rho.dim() != 4) {
    throw std::invalid_argument("depolarize2: the channel acts on one qubit pair");
  }
  DensityMatrix out = rho;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      out.at(i, j) *= mu;
      if (i == j) out.at(i, j) += (1.0 - mu) / 4.0;
    }
  }
  return out;
}

BellDiagonalState depolarize2(const BellDiagonalState& state, double mu) {
  check_unit(mu, "mu");
  return {state.F, mu * state.mu};
}

DensityMatrix swap_full(const DensityMatrix& rho12, const DensityMatrix& rho34, double mu) {
  check_unit(mu, "mu");
  if (rho12.dim() != 4 || rho34.dim() != 4) {
    throw std::invalid_argument("swap_full: inputs must be two-qubit states");
  }
  const DensityMatrix rho = rho12.kron(rho34);

  // 1-based index sets of the partial blocks over the middle qubits 2 and 3.
  static constexpr int b00[4] = {1, 2, 9, 10};
  static constexpr int b01[4] = {3, 4, 11, 12};
  static constexpr int b10[4] = {5, 6, 13, 14};
  static constexpr int b11[4] = {7, 8, 15, 16};

  // <Psi+| rho |Psi+> over qubits 2,3 with |Psi+> = (|10> + |01>)/sqrt(2).
  DensityMatrix proj(4);
  add_scaled(proj, submatrix(rho, b01, b01), 0.5);
  add_scaled(proj, submatrix(rho, b10, b10), 0.5);
  add_scaled(proj, submatrix(rho, b01, b10), 0.5);
  add_scaled(proj, submatrix(rho, b10, b01), 0.5);

  DensityMatrix partial_trace(4);
  add_scaled(partial_trace, submatrix(rho, b00, b00), 1.0);
  add_scaled(partial_trace, submatrix(rho, b01, b01), 1.0);
  add_scaled(partial_trace, submatrix(rho, b10, b10), 1.0);
  add_scaled(partial_trace, submatrix(rho, b11, b11), 1.0);

  DensityMatrix out(4);
  add_scaled(out, proj, mu);
  add_scaled(out, partial_trace, (1.0 - mu) / 4.0);
  const double norm = out.trace().real();
  if (!(norm > 1e-12)) {
    throw std::runtime_error("swap_full: vanishing projection probability");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) out.at(i, j) /= norm;
  }
  return out;
}

BellDiagonalState swap_family(const BellDiagonalState& a, const BellDiagonalState& b,
                              double mu) {
  check_unit(a.F, "F");
  check_unit(b.F, "F");
  check_unit(a.mu, "mu");
  check_unit(b.mu, "mu");
  check_unit(mu, "mu");
  return {swap_fidelity(a.F, b.F), mu * a.mu * b.mu};
}

BellDiagonalState final_state(const FinalStateParams& params) {
  if (params.n < 1) throw std::domain_error("final_state: n must be >= 1");
  check_unit(params.F0, "F0");
  check_unit(params.mu0, "mu0");
  check_unit(params.mu, "mu");
  check_unit(params.exp_dephasing, "exp_dephasing");
  const double mu_n = std::pow(params.mu, params.n - 1) * std::pow(params.mu0, params.n);
  const double balance = std::pow(2.0 * params.F0 - 1.0, params.n) * params.exp_dephasing;
  return {(1.0 + balance) / 2.0, mu_n};
}

Qbers qbers(const FinalStateParams& params) {
  const BellDiagonalState state = final_state(params);
  const double mu_n = state.mu;
  Qbers out;
  out.e_z = (1.0 - mu_n) / 2.0;
  out.e_x = (1.0 - mu_n * (2.0 * state.F - 1.0)) / 2.0;
  return out;
}

}  // namespace rpgf
