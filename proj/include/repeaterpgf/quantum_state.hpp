// Density-operator layer: one-qubit dephasing and two-qubit depolarizing
// channels, the Bell-measurement swap, the two-parameter Bell-diagonal state
// family closed under all of these, and the final n-segment state with its
// error rates.  Matrices are small (4x4 and 16x16) complex arrays.
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace rpgf {

// State Gamma~_mu(F |Psi+><Psi+| + (1-F) |Psi-><Psi-|), the family closed
// under dephasing, depolarization and entanglement swapping.
struct BellDiagonalState {
  double F = 1.0;   // Psi+ weight before depolarization
  double mu = 1.0;  // depolarization survival
};

// Dense complex matrix in the computational basis with tensor-product
// ordering; dimension is a power of two (4 for one pair, 16 for two).
class DensityMatrix {
 public:
  explicit DensityMatrix(std::size_t dim);
  static DensityMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  int qubits() const { return qubits_; }

  std::complex<double>& at(std::size_t row, std::size_t col);
  const std::complex<double>& at(std::size_t row, std::size_t col) const;

  DensityMatrix kron(const DensityMatrix& other) const;
  std::complex<double> trace() const;
  bool is_hermitian(double tol = 1e-12) const;

  // Smallest eigenvalue, assuming the matrix is Hermitian (cyclic Jacobi on
  // the real-symmetric embedding).
  double min_eigenvalue() const;

  // Row-major text form for debugging.
  std::string to_text() const;

  friend bool approx_equal(const DensityMatrix& a, const DensityMatrix& b, double tol);

 private:
  std::size_t dim_;
  int qubits_;
  std::vector<std::complex<double>> a_;
};

bool approx_equal(const DensityMatrix& a, const DensityMatrix& b, double tol);

// 4x4 matrix of the family state in the ordered two-qubit basis.
DensityMatrix realize(const BellDiagonalState& state);

// One-qubit dephasing channel of strength alpha >= 0 acting on the given
// qubit (0-based, leftmost first).  The lambda form takes 0 <= lambda < 1/2.
DensityMatrix dephase(const DensityMatrix& rho, double alpha, int qubit);
DensityMatrix dephase_lambda(const DensityMatrix& rho, double lambda, int qubit);

// Family states dephase identically on either qubit; only F changes.
BellDiagonalState dephase(const BellDiagonalState& state, double alpha);

// Z-conjugation on one qubit (the extreme point of the dephasing channel).
DensityMatrix pauli_z_conjugate(const DensityMatrix& rho, int qubit);

// Two-qubit depolarizing channel mu rho + (1 - mu) I/4.
DensityMatrix depolarize2(const DensityMatrix& rho, double mu);
BellDiagonalState depolarize2(const BellDiagonalState& state, double mu);

// Bell measurement of the middle pair (qubits 2 and 3 of rho12 (x) rho34)
// with gate depolarization mu, projected on Psi+ and renormalized.  Throws
// std::runtime_error when the projection probability vanishes.
DensityMatrix swap_full(const DensityMatrix& rho12, const DensityMatrix& rho34, double mu);

// Same operation inside the family: F_d = (2F_1-1)(2F_2-1)/2 + 1/2 and
// mu_d = mu mu_1 mu_2.
BellDiagonalState swap_family(const BellDiagonalState& a, const BellDiagonalState& b,
                              double mu);

// Fidelity composition rule, usable with any field type (double or the exact
// rational type) since it involves only ring operations.
template <class T>
T swap_fidelity(const T& f1, const T& f2) {
  const T one(1), two(2);
  return (two * f1 - one) * (two * f2 - one) / two + one / two;
}

// Parameters of the final n-segment state: mu_n = mu^(n-1) mu0^n and the
// Psi+/Psi- balance is set by (2F0-1)^n times the dephasing factor, which
// may be a pointwise e^(-alpha d) or the expectation E[e^(-alpha D_n)].
struct FinalStateParams {
  int n = 1;
  double F0 = 1.0;
  double mu0 = 1.0;
  double mu = 1.0;
  double exp_dephasing = 1.0;
};

BellDiagonalState final_state(const FinalStateParams& params);

struct Qbers {
  double e_z = 0.0;
  double e_x = 0.0;
};

// e_z = (1 - mu^(n-1) mu0^n)/2, e_x = (1 - mu^(n-1) mu0^n (2F0-1)^n Ed)/2.
Qbers qbers(const FinalStateParams& params);

}  // namespace rpgf
