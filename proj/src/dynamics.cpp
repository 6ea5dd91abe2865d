#include "machclock/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace machclock {

namespace {

constexpr cplx kI{0.0, 1.0};

CompiledGenerator::Sparse sparse_of(const Matrix& m) {
    CompiledGenerator::Sparse s = m.sparseView(0.0, 0.0);
    s.makeCompressed();
    return s;
}

double spectral_norm_hermitian(const Matrix& h) {
    if (h.size() == 0 || h.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace

// -------------------------------------------------------------- LindbladModel

LindbladModel::LindbladModel(HilbertSpace space, Operator hamiltonian, std::vector<Dissipator> dissipators)
    : space_(std::move(space)), hamiltonian_(std::move(hamiltonian)), dissipators_(std::move(dissipators)) {
    require(hamiltonian_.space() == space_, ErrorCode::SpaceMismatch, "Hamiltonian not on model space");
    require(hamiltonian_.is_hermitian(), ErrorCode::NonHermitian, "Hamiltonian not Hermitian");
    for (const auto& d : dissipators_) {
        require(d.rate >= 0.0 && std::isfinite(d.rate), ErrorCode::InvalidArgument,
                "dissipator '" + d.label + "' has negative or non-finite rate");
        require(d.op.space() == space_, ErrorCode::SpaceMismatch,
                "dissipator '" + d.label + "' not on model space");
    }
}

LindbladModel LindbladModel::with(Dissipator d) const {
    auto ds = dissipators_;
    ds.push_back(std::move(d));
    return {space_, hamiltonian_, std::move(ds)};
}

double LindbladModel::max_rate() const {
    double r = spectral_norm_hermitian(hamiltonian_.matrix());
    for (const auto& d : dissipators_) r = std::max(r, d.rate);
    return r;
}

bool LindbladModel::preserves_diagonal() const {
    const Matrix& h = hamiltonian_.matrix();
    if ((h - Matrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 0.0) return false;
    for (const auto& d : dissipators_) {
        if (d.rate == 0.0) continue;
        const Matrix& a = d.op.matrix();
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            int nonzero = 0;
            for (Eigen::Index r = 0; r < a.rows(); ++r)
                if (a(r, c) != cplx(0.0)) ++nonzero;
            if (nonzero > 1) return false;
        }
        // distinct columns must also land on distinct rows, else coherences appear
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            int nonzero = 0;
            for (Eigen::Index c = 0; c < a.cols(); ++c)
                if (a(r, c) != cplx(0.0)) ++nonzero;
            if (nonzero > 1) return false;
        }
    }
    return true;
}

const Dissipator& LindbladModel::dissipator(const std::string& label) const {
    for (const auto& d : dissipators_)
        if (d.label == label) return d;
    fail(ErrorCode::InvalidArgument, "no dissipator labelled '" + label + "'");
}

// ---------------------------------------------------------- CompiledGenerator

CompiledGenerator::CompiledGenerator(const LindbladModel& model) {
    Matrix heff = model.hamiltonian().matrix();
    for (const auto& d : model.dissipators()) {
        if (d.rate == 0.0) continue;
        const Matrix& a = d.op.matrix();
        heff -= 0.5 * kI * d.rate * (a.adjoint() * a);
        const Matrix scaled = std::sqrt(d.rate) * a;
        jumps_.push_back(sparse_of(scaled));
        jumps_adj_.push_back(sparse_of(scaled.adjoint()));
    }
    h_eff_ = sparse_of(heff);
    h_eff_adj_ = sparse_of(heff.adjoint());
}

void CompiledGenerator::apply_no_jump(const Matrix& rho, Matrix& out) const {
    out.noalias() = -kI * (h_eff_ * rho);
    out.noalias() += kI * (rho * h_eff_adj_);
}

void CompiledGenerator::apply(const Matrix& rho, Matrix& out) const {
    apply_no_jump(rho, out);
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        const Matrix jr = jumps_[k] * rho;
        out.noalias() += jr * jumps_adj_[k];
    }
}

namespace {

// dst.col(r) += scale * S(r, c) * src.col(c) (S conjugated when `conj`); contiguous column updates only.
void axpy_columns(const CompiledGenerator::Sparse& S, bool conj, cplx scale, const Matrix& src, Matrix& dst) {
    for (Eigen::Index c = 0; c < S.outerSize(); ++c)
        for (CompiledGenerator::Sparse::InnerIterator it(S, c); it; ++it) {
            const cplx v = scale * (conj ? std::conj(it.value()) : it.value());
            dst.col(it.row()).noalias() += v * src.col(c);
        }
}

} // namespace

void CompiledGenerator::apply_hermitian(const Matrix& rho, Matrix& out) const {
    // out = Q + Q^dag with Q = i rho H_eff^dag + (1/2) sum_k A_k rho A_k^dag
    thread_local Matrix w, wt, tt;
    const Eigen::Index n = rho.rows();
    out.setZero(n, n);
    axpy_columns(h_eff_, true, kI, rho, out);
    for (const Sparse& a : jumps_) {
        w.setZero(n, n);
        axpy_columns(a, true, 1.0, rho, w); // rho A^dag
        wt = w.transpose();                 // conj(A rho)
        tt.setZero(n, n);
        axpy_columns(a, false, 1.0, wt, tt); // conj(A rho A^dag)
        out += 0.5 * tt.conjugate();
    }
    out += out.adjoint().eval();
}

Operator generator_action(const LindbladModel& model, const DensityMatrix& rho) {
    require(model.space() == rho.space(), ErrorCode::SpaceMismatch, "state not on model space");
    CompiledGenerator g(model);
    return {rho.space(), g.apply(rho.matrix())};
}

// ------------------------------------------------------------------- evolve

TimeGrid TimeGrid::span(double t_final, double dt, std::size_t stride) {
    require(dt > 0.0 && t_final >= 0.0, ErrorCode::InvalidArgument, "grid needs dt > 0 and t_final >= 0");
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    require(std::abs(static_cast<double>(steps) * dt - t_final) <= 1e-9 * std::max(1.0, t_final),
            ErrorCode::InvalidArgument, "t_final is not an integer multiple of dt");
    return {0.0, dt, steps, stride};
}

void TimeGrid::validate() const {
    require(dt > 0.0 && std::isfinite(dt), ErrorCode::InvalidArgument, "time step must be positive");
    require(stride >= 1, ErrorCode::InvalidArgument, "output stride must be >= 1");
}

const NamedSeries& EvolutionResult::series(const std::string& name) const {
    for (const auto& s : observables)
        if (s.name == name) return s;
    fail(ErrorCode::InvalidArgument, "no observable named '" + name + "'");
}

void symmetrize(Matrix& m) { m = 0.5 * (m + m.adjoint()).eval(); }

namespace {

class Rk4 {
public:
    explicit Rk4(const CompiledGenerator& g) : g_(g) {}

    void step(const Matrix& rho, double dt, Matrix& out) {
        g_.apply_hermitian(rho, k1_);
        tmp_ = rho + (0.5 * dt) * k1_;
        g_.apply_hermitian(tmp_, k2_);
        tmp_ = rho + (0.5 * dt) * k2_;
        g_.apply_hermitian(tmp_, k3_);
        tmp_ = rho + dt * k3_;
        g_.apply_hermitian(tmp_, k4_);
        out = rho + (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    const CompiledGenerator& g_;
    Matrix k1_, k2_, k3_, k4_, tmp_;
};

} // namespace

EvolutionResult evolve(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                       const EvolveOptions& options) {
    require(model.space() == rho0.space(), ErrorCode::SpaceMismatch, "initial state not on model space");
    grid.validate();
    for (const auto& o : options.observables)
        require(o.op.space() == model.space(), ErrorCode::SpaceMismatch, "observable '" + o.name + "' not on model space");
    const double rate = model.max_rate();
    if (rate * grid.dt > tol::kEvolveRateStep) {
        std::ostringstream os;
        os << "max rate " << rate << " times dt " << grid.dt << " exceeds " << tol::kEvolveRateStep;
        fail(ErrorCode::StepTooLarge, os.str());
    }

    const CompiledGenerator gen(model);
    Rk4 rk(gen);
    EvolutionResult result;
    for (const auto& o : options.observables) result.observables.push_back({o.name, {}});

    auto record = [&](double t, const Matrix& m) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        result.min_eigenvalue = std::min(result.min_eigenvalue, lmin);
        if (lmin < tol::kPositivityAbort) {
            std::ostringstream os;
            os << "min eigenvalue " << lmin << " at t = " << t;
            fail(ErrorCode::PositivityViolation, os.str());
        }
        result.times.push_back(t);
        const bool need_state = options.store_states || static_cast<bool>(options.observer);
        if (need_state || !options.observables.empty()) {
            for (std::size_t i = 0; i < options.observables.size(); ++i)
                result.observables[i].values.push_back(
                    (m.transpose().cwiseProduct(options.observables[i].op.matrix())).sum().real());
        }
        if (need_state) {
            DensityMatrix rho = DensityMatrix::from_matrix(model.space(), m);
            if (options.observer) options.observer(t, rho);
            if (options.store_states) result.states.push_back(std::move(rho));
        }
    };

    Matrix rho = rho0.matrix();
    Matrix next, half, half2;
    record(grid.t0, rho);
    for (std::size_t k = 1; k <= grid.steps; ++k) {
        rk.step(rho, grid.dt, next);
        if (options.error_check_stride != 0 && (k - 1) % options.error_check_stride == 0) {
            rk.step(rho, 0.5 * grid.dt, half);
            rk.step(half, 0.5 * grid.dt, half2);
            result.max_step_error = std::max(result.max_step_error, (half2 - next).cwiseAbs().maxCoeff() / 15.0);
        }
        rho.swap(next);
        symmetrize(rho);
        result.max_trace_drift = std::max(result.max_trace_drift, std::abs(rho.trace().real() - 1.0));
        if (k % grid.stride == 0 || k == grid.steps) record(grid.t0 + grid.dt * static_cast<double>(k), rho);
    }
    return result;
}

// ------------------------------------------------------------------- Bloch

Bloch bloch(const DensityMatrix& rho) {
    require(rho.dim() == 2, ErrorCode::InvalidDimension, "Bloch vector needs a qubit state");
    const Matrix& m = rho.matrix();
    // basis (|e>, |g>): sigma_x = |e><g| + |g><e|, sigma_y = -i|e><g| + i|g><e|
    const cplx eg = m(0, 1);
    return {2.0 * eg.real(), -2.0 * eg.imag(), (m(0, 0) - m(1, 1)).real()};
}

DensityMatrix from_bloch(const Bloch& b) {
    Matrix m(2, 2);
    m << 0.5 * (1.0 + b.x3), 0.5 * cplx(b.x1, -b.x2), 0.5 * cplx(b.x1, b.x2), 0.5 * (1.0 - b.x3);
    return DensityMatrix::from_matrix(HilbertSpace::single(2), std::move(m));
}

double two_level_steady_x3(double nbar) { return -1.0 / (2.0 * nbar + 1.0); }

Bloch two_level_closed_form(const Bloch& x0, double gamma, double nbar, double t) {
    require(gamma > 0.0 && nbar >= 0.0 && t >= 0.0, ErrorCode::InvalidArgument,
            "closed form needs gamma > 0, nbar >= 0, t >= 0");
    const double big_gamma = gamma * (2.0 * nbar + 1.0);
    const double x3inf = two_level_steady_x3(nbar);
    const double half = std::exp(-0.5 * big_gamma * t);
    return {x0.x1 * half, x0.x2 * half, x3inf + (x0.x3 - x3inf) * std::exp(-big_gamma * t)};
}

double statistical_distance_rate(const DensityMatrix& rho, const Operator& drho) {
    require(drho.space() == rho.space(), ErrorCode::SpaceMismatch, "drho not on the state space");
    const Matrix& d = drho.matrix();
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    require((d - d.adjoint()).cwiseAbs().maxCoeff() <= tol::kHermitian * scale, ErrorCode::NonHermitian,
            "drho/dt must be Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    RealVector lambda = es.eigenvalues().cwiseMax(tol::kRhoFloor);
    lambda /= lambda.sum();
    const Matrix& v = es.eigenvectors();
    const Matrix dm = v.adjoint() * d * v;
    // L_ij = 2 d_ij / (l_i + l_j) in the eigenbasis; tr(d L) = sum |d_ij|^2 * 2/(l_i + l_j)
    double f = 0.0;
    for (Eigen::Index i = 0; i < dm.rows(); ++i)
        for (Eigen::Index j = 0; j < dm.cols(); ++j) f += std::norm(dm(i, j)) * 2.0 / (lambda(i) + lambda(j));
    return std::sqrt(std::max(0.0, f));
}

double two_level_statistical_distance_rate(double x3_0, double gamma, double nbar, double t) {
    const double big_gamma = gamma * (2.0 * nbar + 1.0);
    const double x3inf = two_level_steady_x3(nbar);
    const double x3 = x3inf + (x3_0 - x3inf) * std::exp(-big_gamma * t);
    const double num = big_gamma * big_gamma * (x3_0 - x3inf) * (x3_0 - x3inf) * std::exp(-2.0 * big_gamma * t);
    return std::sqrt(num / (1.0 - x3 * x3));
}

double clock_bound(double ds_dt) {
    require(ds_dt >= 0.0 && !std::isnan(ds_dt), ErrorCode::InvalidArgument, "ds/dt must be >= 0");
    if (ds_dt == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / ds_dt;
}

} // namespace machclock
