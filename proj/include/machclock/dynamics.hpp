#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "machclock/quantum_core.hpp"

namespace machclock {

struct Dissipator {
    std::string label;
    double rate = 0.0; // 1/time
    Operator op;
};

/// Hamiltonian (hbar = 1) plus rate-weighted dissipators; the full dynamical specification.
class LindbladModel {
public:
    LindbladModel() = default;
    LindbladModel(HilbertSpace space, Operator hamiltonian, std::vector<Dissipator> dissipators);

    static LindbladModel dissipative(HilbertSpace space, std::vector<Dissipator> dissipators) {
        Operator h = Operator::zero(space);
        return {std::move(space), std::move(h), std::move(dissipators)};
    }

    const HilbertSpace& space() const noexcept { return space_; }
    const Operator& hamiltonian() const noexcept { return hamiltonian_; }
    const std::vector<Dissipator>& dissipators() const noexcept { return dissipators_; }

    /// New model with one more dissipator.
    LindbladModel with(Dissipator d) const;

    /// max(largest dissipator rate, spectral norm of H); used by step preconditions.
    double max_rate() const;

    /// True when the dynamics maps diagonal states to diagonal states: H diagonal and
    /// every jump operator has at most one nonzero per column.
    bool preserves_diagonal() const;

    const Dissipator& dissipator(const std::string& label) const;

private:
    HilbertSpace space_;
    Operator hamiltonian_;
    std::vector<Dissipator> dissipators_;
};

/// The right-hand side L(rho) with sparse views of the operators; built once per run.
class CompiledGenerator {
public:
    using Sparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

    explicit CompiledGenerator(const LindbladModel& model);

    /// L(rho) = -i H_eff rho + i rho H_eff^dag + sum_k rate_k A_k rho A_k^dag
    void apply(const Matrix& rho, Matrix& out) const;
    Matrix apply(const Matrix& rho) const {
        Matrix out;
        apply(rho, out);
        return out;
    }

    /// Same as apply for Hermitian rho, with half the products.
    void apply_hermitian(const Matrix& rho, Matrix& out) const;

    /// No-jump part only: -i H_eff rho + i rho H_eff^dag
    void apply_no_jump(const Matrix& rho, Matrix& out) const;

    const Sparse& h_eff() const noexcept { return h_eff_; }
    std::size_t jump_count() const noexcept { return jumps_.size(); }
    const Sparse& jump(std::size_t k) const { return jumps_[k]; } // sqrt(rate) * A
    const Sparse& jump_adjoint(std::size_t k) const { return jumps_adj_[k]; }

private:
    Sparse h_eff_;
    Sparse h_eff_adj_;
    std::vector<Sparse> jumps_;
    std::vector<Sparse> jumps_adj_;
};

/// L(rho) as an operator.
Operator generator_action(const LindbladModel& model, const DensityMatrix& rho);

/// Uniform grid t0 + k*dt, k = 0..steps; states are reported every `stride` steps and at the end.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t stride = 1;

    static TimeGrid span(double t_final, double dt, std::size_t stride = 1);
    double t_final() const { return t0 + dt * static_cast<double>(steps); }
    void validate() const;
};

struct NamedObservable {
    std::string name;
    Operator op;
};

struct NamedSeries {
    std::string name;
    std::vector<double> values;
};

struct EvolveOptions {
    bool store_states = true;
    std::vector<NamedObservable> observables;
    /// Compute the step-doubling error estimate every this many steps (0 disables).
    std::size_t error_check_stride = 1;
    /// Called at every output point.
    std::function<void(double, const DensityMatrix&)> observer;
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<NamedSeries> observables;
    double max_trace_drift = 0.0;
    double max_step_error = 0.0; // step-doubling estimate, max-abs entry
    double min_eigenvalue = 1.0; // smallest eigenvalue seen at output points

    const NamedSeries& series(const std::string& name) const;
};

/// Fixed-step classical RK4 integration of the Lindblad equation.
EvolutionResult evolve(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                       const EvolveOptions& options = {});

/// Hermitian symmetrisation (rho + rho^dag)/2 in place.
void symmetrize(Matrix& m);

// ------------------------------------------------------------- qubit / Bloch

struct Bloch {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;
    double norm2() const { return x1 * x1 + x2 * x2 + x3 * x3; }
};

Bloch bloch(const DensityMatrix& rho);
DensityMatrix from_bloch(const Bloch& b);

/// Closed-form Bloch solution of the thermal two-level master equation.
Bloch two_level_closed_form(const Bloch& x0, double gamma, double nbar, double t);
/// -1/(2 nbar + 1)
double two_level_steady_x3(double nbar);

/// Rate of change of statistical distance: sqrt(tr(drho L)) with (rho L + L rho)/2 = drho.
double statistical_distance_rate(const DensityMatrix& rho, const Operator& drho);

/// Closed form of (ds/dt) for an initially thermal qubit under the two-level thermal model.
double two_level_statistical_distance_rate(double x3_0, double gamma, double nbar, double t);

/// Lower bound on the time uncertainty, 1/(ds/dt); +infinity when ds/dt = 0.
double clock_bound(double ds_dt);

} // namespace machclock
