#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "machclock/errors.hpp"
#include "machclock/tolerances.hpp"

namespace machclock {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Ordered product of subsystem dimensions.
class HilbertSpace {
public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<int> dims, std::size_t cap = tol::kDimensionCap);

    static HilbertSpace single(int dim) { return HilbertSpace({dim}); }

    const std::vector<int>& dims() const noexcept { return dims_; }
    std::size_t subsystems() const noexcept { return dims_.size(); }
    int dim(std::size_t site) const { return dims_.at(site); }
    std::size_t total() const noexcept { return total_; }

    /// Concatenation (tensor product of spaces).
    HilbertSpace operator*(const HilbertSpace& other) const;

    bool operator==(const HilbertSpace&) const = default;

private:
    std::vector<int> dims_;
    std::size_t total_ = 0;
};

class Operator {
public:
    Operator() = default;
    Operator(HilbertSpace space, Matrix matrix);

    static Operator identity(const HilbertSpace& space);
    static Operator zero(const HilbertSpace& space);

    const HilbertSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return space_.total(); }

    Operator dagger() const { return {space_, matrix_.adjoint()}; }
    bool is_hermitian(double tol = tol::kHermitian) const;

    Operator operator+(const Operator& o) const;
    Operator operator-(const Operator& o) const;
    Operator operator*(const Operator& o) const;
    Operator operator*(cplx s) const { return {space_, matrix_ * s}; }
    Operator operator*(double s) const { return {space_, matrix_ * s}; }
    friend Operator operator*(double s, const Operator& a) { return a * s; }
    friend Operator operator*(cplx s, const Operator& a) { return a * s; }

    cplx trace() const { return matrix_.trace(); }

private:
    HilbertSpace space_;
    Matrix matrix_;
};

Operator tensor(const Operator& a, const Operator& b);
Operator tensor(std::span<const Operator> factors);
/// Places a single-site operator at `site` of `space`, identity elsewhere.
Operator embed(const Operator& local, std::size_t site, const HilbertSpace& space);
Operator commutator(const Operator& a, const Operator& b);

/// Hermitian, unit-trace, positive operator.
class DensityMatrix {
public:
    DensityMatrix() = default;

    /// Validates the invariants; throws otherwise.
    static DensityMatrix from_matrix(const HilbertSpace& space, Matrix m);
    static DensityMatrix diagonal(const HilbertSpace& space, std::span<const double> probabilities);
    static DensityMatrix pure(const HilbertSpace& space, const Eigen::VectorXcd& psi);
    static DensityMatrix basis_state(const HilbertSpace& space, std::size_t index);
    static DensityMatrix maximally_mixed(const HilbertSpace& space);

    const HilbertSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return space_.total(); }

    double expectation(const Operator& a) const;          // real part of tr(rho A)
    cplx expectation_complex(const Operator& a) const;
    RealVector eigenvalues() const;
    double min_eigenvalue() const;
    bool is_diagonal(double tol = tol::kDiagonal) const;
    RealVector populations() const { return matrix_.diagonal().real(); }

    Operator as_operator() const { return {space_, matrix_}; }

    DensityMatrix partial_trace(std::span<const std::size_t> keep) const;

private:
    DensityMatrix(HilbertSpace space, Matrix m) : space_(std::move(space)), matrix_(std::move(m)) {}
    HilbertSpace space_;
    Matrix matrix_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Half the trace norm of the difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
/// Uhlmann root fidelity tr sqrt(sqrt(a) b sqrt(a)).
double root_fidelity(const DensityMatrix& a, const DensityMatrix& b);

// Standard operators. Qubits use the basis (|e>, |g>) so sigma_z = diag(1, -1).
Operator annihilation(int dim);
Operator creation(int dim);
Operator number(int dim);
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_minus(); // |g><e|
Operator sigma_plus();  // |e><g|

struct AngularMomentum {
    Operator jplus;
    Operator jminus;
    Operator jz;
};

/// (2j+1)-dimensional irrep, basis ordered m = j, j-1, ..., -j.
AngularMomentum angular_momentum(int two_j);

/// A rho A^dag - (A^dag A rho + rho A^dag A)/2
Operator dissipator(const Operator& a, const DensityMatrix& rho);
/// A rho + rho A^dag - tr[(A + A^dag) rho] rho
Operator innovation(const Operator& a, const DensityMatrix& rho);

/// diag(p_e, p_g) with p_e = (1 + tanh(-beta*eps/2))/2.
DensityMatrix thermal_qubit(double beta_eps);
/// Truncated geometric occupation distribution with mean nbar.
DensityMatrix thermal_mode(double nbar, int cutoff);
/// Probability mass of a geometric law with mean nbar at levels >= cutoff.
double thermal_tail_mass(double nbar, int cutoff);
/// Smallest cutoff whose thermal tail is below the tolerance.
int thermal_cutoff(double nbar, double tail = tol::kTailMass);

} // namespace machclock
