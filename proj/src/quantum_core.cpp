#include "machclock/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace machclock {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::SpaceMismatch: return "space-mismatch";
    case ErrorCode::CutoffTooSmall: return "cutoff-too-small";
    case ErrorCode::StepTooLarge: return "step-too-large";
    case ErrorCode::PositivityViolation: return "positivity-violation";
    case ErrorCode::NonHermitian: return "non-hermitian";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::ConfigError: return "config-error";
    case ErrorCode::IoError: return "io-error";
    }
    return "unknown";
}

// ---------------------------------------------------------------- HilbertSpace

HilbertSpace::HilbertSpace(std::vector<int> dims, std::size_t cap) : dims_(std::move(dims)) {
    require(!dims_.empty(), ErrorCode::InvalidDimension, "empty dimension list");
    total_ = 1;
    for (int d : dims_) {
        require(d >= 1, ErrorCode::InvalidDimension, "subsystem dimension must be >= 1");
        total_ *= static_cast<std::size_t>(d);
        require(total_ <= cap, ErrorCode::InvalidDimension,
                "total dimension exceeds cap of " + std::to_string(cap));
    }
}

HilbertSpace HilbertSpace::operator*(const HilbertSpace& other) const {
    std::vector<int> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return HilbertSpace(std::move(d));
}

// -------------------------------------------------------------------- Operator

Operator::Operator(HilbertSpace space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
    require(matrix_.rows() == matrix_.cols(), ErrorCode::InvalidDimension, "operator matrix not square");
    require(static_cast<std::size_t>(matrix_.rows()) == space_.total(), ErrorCode::InvalidDimension,
            "operator matrix does not match space dimension");
}

Operator Operator::identity(const HilbertSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.total());
    return {space, Matrix::Identity(n, n)};
}

Operator Operator::zero(const HilbertSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.total());
    return {space, Matrix::Zero(n, n)};
}

bool Operator::is_hermitian(double tol) const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, matrix_.cwiseAbs().maxCoeff());
}

static void same_space(const HilbertSpace& a, const HilbertSpace& b) {
    require(a == b, ErrorCode::SpaceMismatch, "operands live on different spaces");
}

Operator Operator::operator+(const Operator& o) const {
    same_space(space_, o.space_);
    return {space_, matrix_ + o.matrix_};
}

Operator Operator::operator-(const Operator& o) const {
    same_space(space_, o.space_);
    return {space_, matrix_ - o.matrix_};
}

Operator Operator::operator*(const Operator& o) const {
    same_space(space_, o.space_);
    return {space_, matrix_ * o.matrix_};
}

Operator tensor(const Operator& a, const Operator& b) {
    Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
    return {a.space() * b.space(), std::move(m)};
}

Operator tensor(std::span<const Operator> factors) {
    require(!factors.empty(), ErrorCode::InvalidArgument, "tensor of empty list");
    Operator out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
    return out;
}

Operator embed(const Operator& local, std::size_t site, const HilbertSpace& space) {
    require(site < space.subsystems(), ErrorCode::InvalidArgument, "site out of range");
    require(local.dim() == static_cast<std::size_t>(space.dim(site)), ErrorCode::SpaceMismatch,
            "local operator dimension does not match site");
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t s = 0; s < space.subsystems(); ++s) {
        const int d = space.dim(s);
        Matrix factor = (s == site) ? local.matrix() : Matrix::Identity(d, d);
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return {space, std::move(out)};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// --------------------------------------------------------------- DensityMatrix

DensityMatrix DensityMatrix::from_matrix(const HilbertSpace& space, Matrix m) {
    require(m.rows() == m.cols() && static_cast<std::size_t>(m.rows()) == space.total(),
            ErrorCode::InvalidDimension, "density matrix does not match space dimension");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    require(herm <= tol::kHermitian, ErrorCode::NonHermitian,
            "density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    const double tr = m.trace().real();
    require(std::abs(tr - 1.0) <= tol::kTrace, ErrorCode::InvalidArgument,
            "density matrix trace " + std::to_string(tr) + " != 1");
    DensityMatrix rho(space, std::move(m));
    const double lmin = rho.min_eigenvalue();
    require(lmin >= tol::kMinEigenvalue, ErrorCode::PositivityViolation,
            "density matrix eigenvalue " + std::to_string(lmin));
    return rho;
}

DensityMatrix DensityMatrix::diagonal(const HilbertSpace& space, std::span<const double> probabilities) {
    require(probabilities.size() == space.total(), ErrorCode::InvalidDimension,
            "probability vector does not match space dimension");
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(space.total()), static_cast<Eigen::Index>(space.total()));
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        require(probabilities[i] >= 0.0, ErrorCode::InvalidArgument, "negative probability");
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = probabilities[i];
    }
    return from_matrix(space, std::move(m));
}

DensityMatrix DensityMatrix::pure(const HilbertSpace& space, const Eigen::VectorXcd& psi) {
    require(static_cast<std::size_t>(psi.size()) == space.total(), ErrorCode::InvalidDimension,
            "state vector does not match space dimension");
    const double norm = psi.norm();
    require(norm > 0.0, ErrorCode::InvalidArgument, "zero state vector");
    const Eigen::VectorXcd v = psi / norm;
    return from_matrix(space, v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(const HilbertSpace& space, std::size_t index) {
    require(index < space.total(), ErrorCode::InvalidArgument, "basis index out of range");
    std::vector<double> p(space.total(), 0.0);
    p[index] = 1.0;
    return diagonal(space, p);
}

DensityMatrix DensityMatrix::maximally_mixed(const HilbertSpace& space) {
    std::vector<double> p(space.total(), 1.0 / static_cast<double>(space.total()));
    return diagonal(space, p);
}

cplx DensityMatrix::expectation_complex(const Operator& a) const {
    same_space(space_, a.space());
    // tr(rho A) without forming the product
    return (matrix_.transpose().cwiseProduct(a.matrix())).sum();
}

double DensityMatrix::expectation(const Operator& a) const { return expectation_complex(a).real(); }

RealVector DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

bool DensityMatrix::is_diagonal(double tol) const {
    const Matrix off = matrix_ - Matrix(matrix_.diagonal().asDiagonal());
    return off.cwiseAbs().maxCoeff() <= tol;
}

DensityMatrix DensityMatrix::partial_trace(std::span<const std::size_t> keep) const {
    const auto& dims = space_.dims();
    const std::size_t ns = dims.size();
    std::vector<bool> kept(ns, false);
    std::vector<int> kdims;
    for (std::size_t k : keep) {
        require(k < ns, ErrorCode::InvalidArgument, "partial trace site out of range");
        require(!kept[k], ErrorCode::InvalidArgument, "duplicate partial trace site");
        kept[k] = true;
    }
    for (std::size_t s = 0; s < ns; ++s)
        if (kept[s]) kdims.push_back(dims[s]);
    require(!kdims.empty(), ErrorCode::InvalidArgument, "partial trace must keep at least one site");
    HilbertSpace reduced(kdims);

    // strides for row-major (first site most significant) indexing
    std::vector<std::size_t> stride(ns, 1);
    for (std::size_t s = ns - 1; s-- > 0;) stride[s] = stride[s + 1] * static_cast<std::size_t>(dims[s + 1]);

    const std::size_t n = space_.total();
    std::vector<std::size_t> kept_index(n), traced_index(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ki = 0, ti = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            const std::size_t digit = (i / stride[s]) % static_cast<std::size_t>(dims[s]);
            if (kept[s]) ki = ki * static_cast<std::size_t>(dims[s]) + digit;
            else ti = ti * static_cast<std::size_t>(dims[s]) + digit;
        }
        kept_index[i] = ki;
        traced_index[i] = ti;
    }
    const auto r = static_cast<Eigen::Index>(reduced.total());
    Matrix out = Matrix::Zero(r, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (traced_index[i] == traced_index[j])
                out(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
                    matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(reduced, std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
    return DensityMatrix::from_matrix(a.space() * b.space(), std::move(m));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    same_space(a.space(), b.space());
    Matrix d = a.matrix() - b.matrix();
    d = 0.5 * (d + d.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double root_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    same_space(a.space(), b.space());
    Eigen::SelfAdjointEigenSolver<Matrix> ea(a.matrix());
    const RealVector la = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix sqa = ea.eigenvectors() * la.asDiagonal() * ea.eigenvectors().adjoint();
    Matrix inner = sqa * b.matrix() * sqa;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> ei(inner, Eigen::EigenvaluesOnly);
    return ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// ------------------------------------------------------------ standard operators

Operator annihilation(int dim) {
    require(dim >= 2, ErrorCode::InvalidDimension, "annihilation operator needs dim >= 2");
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {HilbertSpace::single(dim), std::move(m)};
}

Operator creation(int dim) { return annihilation(dim).dagger(); }

Operator number(int dim) {
    require(dim >= 1, ErrorCode::InvalidDimension, "number operator needs dim >= 1");
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = n;
    return {HilbertSpace::single(dim), std::move(m)};
}

namespace {
Operator qubit(cplx ee, cplx eg, cplx ge, cplx gg) {
    Matrix m(2, 2);
    m << ee, eg, ge, gg;
    return {HilbertSpace::single(2), std::move(m)};
}
} // namespace

Operator sigma_x() { return qubit(0.0, 1.0, 1.0, 0.0); }
Operator sigma_y() { return qubit(0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0); }
Operator sigma_z() { return qubit(1.0, 0.0, 0.0, -1.0); }
Operator sigma_minus() { return qubit(0.0, 0.0, 1.0, 0.0); }
Operator sigma_plus() { return qubit(0.0, 1.0, 0.0, 0.0); }

AngularMomentum angular_momentum(int two_j) {
    require(two_j >= 0, ErrorCode::InvalidArgument, "2j must be a non-negative integer");
    const int d = two_j + 1;
    const double j = 0.5 * two_j;
    Matrix jz = Matrix::Zero(d, d);
    Matrix jp = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = j - k;
        jz(k, k) = m;
        // J+ |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>, and m+1 sits at index k-1
        if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    const HilbertSpace s = HilbertSpace::single(d);
    Operator plus{s, jp};
    return {plus, plus.dagger(), Operator{s, jz}};
}

Operator dissipator(const Operator& a, const DensityMatrix& rho) {
    same_space(a.space(), rho.space());
    const Matrix& A = a.matrix();
    const Matrix& r = rho.matrix();
    const Matrix ada = A.adjoint() * A;
    Matrix out = A * r * A.adjoint() - 0.5 * (ada * r + r * ada);
    return {rho.space(), std::move(out)};
}

Operator innovation(const Operator& a, const DensityMatrix& rho) {
    same_space(a.space(), rho.space());
    const Matrix& A = a.matrix();
    const Matrix& r = rho.matrix();
    const cplx mean = (r.transpose().cwiseProduct(A + A.adjoint())).sum();
    Matrix out = A * r + r * A.adjoint() - mean.real() * r;
    return {rho.space(), std::move(out)};
}

DensityMatrix thermal_qubit(double beta_eps) {
    require(!std::isnan(beta_eps), ErrorCode::InvalidArgument, "beta*eps is NaN");
    const double pe = 0.5 * (1.0 + std::tanh(-0.5 * beta_eps));
    const std::vector<double> p{pe, 1.0 - pe};
    return DensityMatrix::diagonal(HilbertSpace::single(2), p);
}

double thermal_tail_mass(double nbar, int cutoff) {
    require(nbar >= 0.0 && std::isfinite(nbar), ErrorCode::InvalidArgument, "nbar must be finite and >= 0");
    require(cutoff >= 1, ErrorCode::InvalidDimension, "cutoff must be >= 1");
    if (nbar == 0.0) return 0.0;
    const double lambda = nbar / (nbar + 1.0);
    return std::pow(lambda, cutoff);
}

int thermal_cutoff(double nbar, double tail) {
    int c = 1;
    while (thermal_tail_mass(nbar, c) >= tail) ++c;
    return c;
}

DensityMatrix thermal_mode(double nbar, int cutoff) {
    const double tail = thermal_tail_mass(nbar, cutoff);
    if (tail >= tol::kTailMass) {
        std::ostringstream os;
        os << "thermal tail mass " << tail << " beyond cutoff " << cutoff << " for nbar " << nbar
           << " (need cutoff >= " << thermal_cutoff(nbar) << ")";
        fail(ErrorCode::CutoffTooSmall, os.str());
    }
    const double lambda = nbar / (nbar + 1.0);
    std::vector<double> p(static_cast<std::size_t>(cutoff));
    double w = 1.0 - lambda;
    for (auto& x : p) {
        x = w;
        w *= lambda;
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= total;
    return DensityMatrix::diagonal(HilbertSpace::single(cutoff), p);
}

} // namespace machclock
