#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "machclock/dynamics.hpp"
#include "machclock/trajectories.hpp"

namespace machclock {

/// Qubit coupled to a thermal bath: (gamma (nbar+1), sigma_-) and (gamma nbar, sigma_+).
LindbladModel build_two_level_thermal(double gamma, double nbar);

// ------------------------------------------------------------------- swap

/// Two-qubit swap unitary; S^2 = 1.
Operator swap_operator();

struct SwapModel {
    LindbladModel model;
    std::vector<DiffusiveChannel> channels; // "z1", "z2" when measured
    Operator swap;
};

/// gamma D[S] (= gamma (S rho S - rho)); with a measurement strength, adds Gamma D[sigma_z^(k)]
/// and sigma_z channels with record scale 1/sqrt(8 Gamma).
SwapModel build_swap_model(double gamma, std::optional<double> measurement_Gamma = std::nullopt);

/// Closed form rho(t) = e^{-gamma t}[cosh(gamma t) rho0 + sinh(gamma t) S rho0 S].
Matrix swap_closed_form(const Matrix& rho0, double gamma, double t);

/// tanh(beta_out eps / 2) of the stationary reduced states: the mean of the input values.
double swap_output_tanh(double tanh1, double tanh2);

// ------------------------------------------------------------ optomechanics

struct OptomechParams {
    double g = 0.0;
    double gamma_m = 0.0;
    double nbar = 0.0;
    double kappa_probe = 0.0;
    double gamma_q = 0.0;
    // probe metadata, not used by the eliminated model
    double E0 = 0.0;
    double Omega = 0.0;
    double delta = 0.0;

    /// Throws on negative entries; returns human-readable warnings (adiabatic validity).
    std::vector<std::string> validate() const;
    /// Gamma = 4 g^2 / gamma_m
    double adiabatic_rate() const;
    /// Lambda = 4 kappa^2 / gamma_q
    double number_decoherence_rate() const;
    /// gamma_m nbar >= 10 g
    bool adiabatic_valid() const { return gamma_m * nbar >= tol::kAdiabaticFactor * g; }
};

enum class Direction { Plus, Minus };

/// Mode cutoffs are Hilbert-space dimensions (levels 0..cutoff-1).
struct CavityCutoffs {
    int c1 = 0;
    int c2 = 0;
};

/// Eliminated two-cavity model. Plus: (Gamma(nbar+1), a1 a2^dag) "dN12", (Gamma nbar, a1^dag a2) "dN21".
/// Minus exchanges the two operators.
LindbladModel build_optomech_adiabatic(const OptomechParams& p, Direction d, CavityCutoffs cutoffs);

/// Cavity 1 (x) cavity 2 (x) mechanics with H = g(b a1^dag a2 + b^dag a1 a2^dag) and thermal mechanical damping.
LindbladModel build_full_optomech(const OptomechParams& p, CavityCutoffs cutoffs, int mech_cutoff);

/// Two-mode Schwinger operators: J+ = a1^dag a2, J- = J+^dag, Jz = (n1 - n2)/2, N = n1 + n2.
struct TwoModeSu2 {
    Operator jplus, jminus, jz, n1, n2, total;
};
TwoModeSu2 two_mode_su2(CavityCutoffs cutoffs);

/// Diagonal two-mode state with the given joint number distribution p[n1][n2].
DensityMatrix two_mode_diagonal(CavityCutoffs cutoffs, const std::vector<std::vector<double>>& p);

/// Product of thermal modes restricted to n1 + n2 <= max_total and renormalised.
DensityMatrix two_mode_thermal_projected(double nbar1, double nbar2, CavityCutoffs cutoffs, int max_total);

// ------------------------------------------------------------------- Dicke

struct DickeBlock {
    int two_j = 0;
    double nbar = 0.0;
    double Gamma = 0.0;

    void validate() const;
    double j() const { return 0.5 * two_j; }
    int dim() const { return two_j + 1; }
};

/// (j(j+1) - m(m-1), j(j+1) - m(m+1)); arguments are 2j and 2m.
std::pair<double, double> dicke_rates(int two_j, int two_m);

/// Gamma(nbar+1) D[J-] + Gamma nbar D[J+] on one spin-j block (basis m = j..-j).
LindbladModel build_dicke_block_model(const DickeBlock& block);

/// Generator Q over m = -j..j (index i <-> m = -j + i), dp/dt = Q p, columns sum to zero.
Eigen::MatrixXd classical_birth_death(const DickeBlock& block);

/// p(t) = expm(Q t) p0.
Eigen::VectorXd evolve_birth_death(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p0, double t);

/// <Jz> of a distribution over m = -j..j.
double birth_death_jz(const Eigen::VectorXd& p, int two_j);

// ---------------------------------------------------------- block weights

struct BlockWeights {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::vector<double> pN;                       // N = 0..Nmax
    std::vector<std::vector<double>> p_n_given_N; // [N][n], n = n1 = 0..N
    double tail = 0.0;                            // 1 - sum pN

    std::size_t Nmax() const { return pN.empty() ? 0 : pN.size() - 1; }
    /// Joint p(n1, n2) for n1 + n2 <= Nmax.
    double joint(int n1, int n2) const;
};

/// Decomposition of the product thermal state into (N, n1) blocks; lambda_i = nbar_i/(nbar_i+1).
BlockWeights initial_block_weights(double lambda1, double lambda2, int Nmax);
/// Smallest Nmax whose total-number tail is below the tolerance.
int block_cutoff(double lambda1, double lambda2, double tail = tol::kTailMass);
double lambda_from_nbar(double nbar);

/// Block-classical solution for a mixture of Dicke blocks weighted by `w`, on the grid k*dt, k = 0..steps.
struct BlockMixtureResult {
    std::vector<double> times;
    std::vector<double> jz;
    double mean_N = 0.0;       // of the truncated mixture
    double mean_N_N2 = 0.0;    // <N(N+2)>
    double mean_jz2_0 = 0.0;   // <Jz^2> at t = 0
    double jz_rate0 = 0.0;     // d<Jz>/dt at t = 0
};
BlockMixtureResult evolve_block_mixture(const BlockWeights& w, double Gamma, double nbar, double dt, std::size_t steps);

double jz_initial_mean(double nbar1, double nbar2);
/// (kT1/(hbar w1) - kT2/(hbar w2))/2 from the two reduced temperatures.
double jz_initial_mean_high_temperature(double kT1_over_hw1, double kT2_over_hw2);

struct NMoments {
    double mean = 0.0;
    double second = 0.0;
};
NMoments thermal_N_moments(double nbar1, double nbar2);

enum class SemiclassicalVariant { Paper, Derived };

/// zdot for z = <Jz>/j. Paper: -(3G/2)(N+1) + (G N/2) z^2 - G(2n+1) z; Derived constant: -(3G/4)(N+2).
double semiclassical_rhs(double z, double Gamma, double nbar, double Nbar, SemiclassicalVariant v);
double semiclassical_constant(double Gamma, double Nbar, SemiclassicalVariant v);

/// Right-hand side of the <Jz> equation of motion from exact moments of a state.
double su2_jz_rhs(double Gamma, double nbar, double mean_N_N2, double mean_jz2, double mean_jz);

// ---------------------------------------------------------- number probe

struct MeasuredModel {
    LindbladModel model;
    DiffusiveChannel channel;
};

/// Adds -Lambda [n, [n, rho]] (as the dissipator (2 Lambda, n) "number_dephasing") and a channel "M"
/// on n of `site` with strength Lambda and record scale 1/sqrt(Lambda).
MeasuredModel build_number_measurement(const LindbladModel& model, double Lambda, std::size_t site = 0);

} // namespace machclock
