#include "machclock/models.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace machclock {

namespace {

void require_rate(double x, const char* name) {
    require(x >= 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, std::string(name) + " must be a finite value >= 0");
}

} // namespace

LindbladModel build_two_level_thermal(double gamma, double nbar) {
    require_rate(gamma, "gamma");
    require_rate(nbar, "nbar");
    return LindbladModel::dissipative(HilbertSpace::single(2), {{"decay", gamma * (nbar + 1.0), sigma_minus()},
                                                                {"excite", gamma * nbar, sigma_plus()}});
}

// ------------------------------------------------------------------- swap

Operator swap_operator() {
    const HilbertSpace space({2, 2});
    Matrix s = Matrix::Zero(4, 4);
    // |x y> -> |y x>, index = 2 x + y
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) s(2 * y + x, 2 * x + y) = 1.0;
    return {space, s};
}

SwapModel build_swap_model(double gamma, std::optional<double> measurement_Gamma) {
    require_rate(gamma, "gamma");
    const HilbertSpace space({2, 2});
    Operator s = swap_operator();
    require((s * s - Operator::identity(space)).matrix().cwiseAbs().maxCoeff() < tol::kAlgebra,
            ErrorCode::InvalidArgument, "swap operator is not an involution");
    std::vector<Dissipator> ds{{"swap", gamma, s}};
    std::vector<DiffusiveChannel> channels;
    if (measurement_Gamma) {
        const double G = *measurement_Gamma;
        require_rate(G, "measurement Gamma");
        for (std::size_t k = 0; k < 2; ++k) {
            const std::string name = "z" + std::to_string(k + 1);
            const Operator z = embed(sigma_z(), k, space);
            ds.push_back({"measure_" + name, G, z});
            if (G > 0.0) channels.push_back({name, z, G, 1.0 / std::sqrt(8.0 * G)});
        }
    }
    return {LindbladModel::dissipative(space, std::move(ds)), std::move(channels), std::move(s)};
}

Matrix swap_closed_form(const Matrix& rho0, double gamma, double t) {
    const Matrix& s = swap_operator().matrix();
    // e^{-gt} cosh(gt) = (1 + e^{-2gt})/2, e^{-gt} sinh(gt) = (1 - e^{-2gt})/2
    const double e = std::exp(-2.0 * gamma * t);
    return 0.5 * (1.0 + e) * rho0 + 0.5 * (1.0 - e) * (s * rho0 * s);
}

double swap_output_tanh(double tanh1, double tanh2) { return 0.5 * (tanh1 + tanh2); }

// ------------------------------------------------------------ optomechanics

std::vector<std::string> OptomechParams::validate() const {
    require_rate(g, "g");
    require_rate(gamma_m, "gamma_m");
    require_rate(nbar, "nbar");
    require_rate(kappa_probe, "kappa_probe");
    require_rate(gamma_q, "gamma_q");
    std::vector<std::string> warnings;
    if (!adiabatic_valid()) {
        std::ostringstream os;
        os << "adiabatic elimination questionable: gamma_m*nbar = " << gamma_m * nbar << " < " << tol::kAdiabaticFactor
           << "*g = " << tol::kAdiabaticFactor * g;
        warnings.push_back(os.str());
    }
    return warnings;
}

double OptomechParams::adiabatic_rate() const {
    require(gamma_m > 0.0, ErrorCode::InvalidArgument, "gamma_m must be > 0 for the adiabatic rate");
    return 4.0 * g * g / gamma_m;
}

double OptomechParams::number_decoherence_rate() const {
    require(gamma_q > 0.0, ErrorCode::InvalidArgument, "gamma_q must be > 0 for the number decoherence rate");
    return 4.0 * kappa_probe * kappa_probe / gamma_q;
}

TwoModeSu2 two_mode_su2(CavityCutoffs c) {
    require(c.c1 >= 2 && c.c2 >= 2, ErrorCode::CutoffTooSmall, "cavity cutoffs must be >= 2");
    const HilbertSpace space({c.c1, c.c2});
    const Operator a1 = embed(annihilation(c.c1), 0, space);
    const Operator a2 = embed(annihilation(c.c2), 1, space);
    const Operator n1 = a1.dagger() * a1;
    const Operator n2 = a2.dagger() * a2;
    const Operator jp = a1.dagger() * a2;
    return {jp, jp.dagger(), 0.5 * (n1 - n2), n1, n2, n1 + n2};
}

LindbladModel build_optomech_adiabatic(const OptomechParams& p, Direction d, CavityCutoffs cutoffs) {
    p.validate();
    const double G = p.adiabatic_rate();
    const TwoModeSu2 su = two_mode_su2(cutoffs);
    // a1 a2^dag moves a photon 1 -> 2
    const Operator& to2 = su.jminus;
    const Operator& to1 = su.jplus;
    const bool plus = d == Direction::Plus;
    return LindbladModel::dissipative(su.n1.space(), {{"dN12", G * (plus ? p.nbar + 1.0 : p.nbar), to2},
                                                      {"dN21", G * (plus ? p.nbar : p.nbar + 1.0), to1}});
}

LindbladModel build_full_optomech(const OptomechParams& p, CavityCutoffs c, int mech_cutoff) {
    p.validate();
    require(c.c1 >= 2 && c.c2 >= 2 && mech_cutoff >= 2, ErrorCode::CutoffTooSmall, "cutoffs must be >= 2");
    const double tail = thermal_tail_mass(p.nbar, mech_cutoff);
    if (tail >= tol::kTailMass) {
        std::ostringstream os;
        os << "mechanical cutoff " << mech_cutoff << " leaves thermal tail " << tail << " for nbar = " << p.nbar
           << "; need " << thermal_cutoff(p.nbar);
        fail(ErrorCode::CutoffTooSmall, os.str());
    }
    const HilbertSpace space({c.c1, c.c2, mech_cutoff});
    const Operator a1 = embed(annihilation(c.c1), 0, space);
    const Operator a2 = embed(annihilation(c.c2), 1, space);
    const Operator b = embed(annihilation(mech_cutoff), 2, space);
    const Operator coupling = b * a1.dagger() * a2;
    const Operator h = p.g * (coupling + coupling.dagger());
    return {space, h, {{"mech_decay", p.gamma_m * (p.nbar + 1.0), b}, {"mech_excite", p.gamma_m * p.nbar, b.dagger()}}};
}

DensityMatrix two_mode_diagonal(CavityCutoffs c, const std::vector<std::vector<double>>& p) {
    const HilbertSpace space({c.c1, c.c2});
    std::vector<double> diag(space.total(), 0.0);
    for (std::size_t n1 = 0; n1 < p.size(); ++n1)
        for (std::size_t n2 = 0; n2 < p[n1].size(); ++n2) {
            if (p[n1][n2] == 0.0) continue;
            require(n1 < static_cast<std::size_t>(c.c1) && n2 < static_cast<std::size_t>(c.c2),
                    ErrorCode::CutoffTooSmall, "distribution exceeds the cavity cutoffs");
            diag[n1 * static_cast<std::size_t>(c.c2) + n2] = p[n1][n2];
        }
    return DensityMatrix::diagonal(space, diag);
}

DensityMatrix two_mode_thermal_projected(double nbar1, double nbar2, CavityCutoffs c, int max_total) {
    require_rate(nbar1, "nbar1");
    require_rate(nbar2, "nbar2");
    const double l1 = lambda_from_nbar(nbar1), l2 = lambda_from_nbar(nbar2);
    std::vector<std::vector<double>> p(static_cast<std::size_t>(c.c1), std::vector<double>(static_cast<std::size_t>(c.c2)));
    double total = 0.0;
    for (int n1 = 0; n1 < c.c1; ++n1)
        for (int n2 = 0; n2 < c.c2; ++n2)
            if (n1 + n2 <= max_total) {
                p[n1][n2] = std::pow(l1, n1) * std::pow(l2, n2);
                total += p[n1][n2];
            }
    for (auto& row : p)
        for (auto& x : row) x /= total;
    return two_mode_diagonal(c, p);
}

// ------------------------------------------------------------------- Dicke

void DickeBlock::validate() const {
    require(two_j >= 0, ErrorCode::InvalidArgument, "2j must be >= 0");
    require_rate(nbar, "nbar");
    require_rate(Gamma, "Gamma");
}

std::pair<double, double> dicke_rates(int two_j, int two_m) {
    require(two_j >= 0 && std::abs(two_m) <= two_j && (two_j - two_m) % 2 == 0, ErrorCode::InvalidArgument,
            "invalid (j, m)");
    const double j = 0.5 * two_j, m = 0.5 * two_m;
    return {j * (j + 1.0) - m * (m - 1.0), j * (j + 1.0) - m * (m + 1.0)};
}

LindbladModel build_dicke_block_model(const DickeBlock& block) {
    block.validate();
    require(block.two_j >= 1, ErrorCode::InvalidDimension, "Dicke block needs j >= 1/2");
    const AngularMomentum am = angular_momentum(block.two_j);
    return LindbladModel::dissipative(am.jz.space(), {{"down", block.Gamma * (block.nbar + 1.0), am.jminus},
                                                      {"up", block.Gamma * block.nbar, am.jplus}});
}

Eigen::MatrixXd classical_birth_death(const DickeBlock& block) {
    block.validate();
    const int n = block.dim();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    const double down = block.Gamma * (block.nbar + 1.0), up = block.Gamma * block.nbar;
    for (int i = 0; i < n; ++i) {
        const int two_m = -block.two_j + 2 * i;
        const auto [fd, fu] = dicke_rates(block.two_j, two_m);
        if (i > 0) q(i - 1, i) += down * fd;
        if (i + 1 < n) q(i + 1, i) += up * fu;
        q(i, i) -= down * fd + up * fu;
    }
    return q;
}

Eigen::VectorXd evolve_birth_death(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p0, double t) {
    require(Q.rows() == Q.cols() && Q.rows() == p0.size(), ErrorCode::InvalidDimension, "generator/state size mismatch");
    const Eigen::MatrixXd qt = Q * t;
    return qt.exp() * p0;
}

double birth_death_jz(const Eigen::VectorXd& p, int two_j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += p(i) * (-0.5 * two_j + static_cast<double>(i));
    return s;
}

// ---------------------------------------------------------- block weights

double lambda_from_nbar(double nbar) {
    require_rate(nbar, "nbar");
    return nbar / (nbar + 1.0);
}

BlockWeights initial_block_weights(double l1, double l2, int Nmax) {
    require(l1 >= 0.0 && l1 < 1.0 && l2 >= 0.0 && l2 < 1.0, ErrorCode::InvalidArgument, "lambda must lie in [0, 1)");
    require(Nmax >= 0, ErrorCode::InvalidArgument, "Nmax must be >= 0");
    BlockWeights w;
    w.lambda1 = l1;
    w.lambda2 = l2;
    const double norm = (1.0 - l1) * (1.0 - l2);
    double sum = 0.0;
    for (int N = 0; N <= Nmax; ++N) {
        // sum_{n=0}^N l1^n l2^(N-n), summed directly: no cancellation as l1 -> l2
        double s = 0.0;
        for (int n = 0; n <= N; ++n) s += std::pow(l1, n) * std::pow(l2, N - n);
        w.pN.push_back(norm * s);
        sum += w.pN.back();

        std::vector<double> cond(static_cast<std::size_t>(N) + 1);
        if (l1 == l2) {
            std::fill(cond.begin(), cond.end(), 1.0 / (N + 1));
        } else if (l1 < l2) {
            const double mu = l1 / l2; // weights mu^n
            double z = 0.0;
            for (int n = 0; n <= N; ++n) z += cond[n] = std::pow(mu, n);
            for (auto& x : cond) x /= z;
        } else {
            const double nu = l2 / l1; // weights nu^(N-n)
            double z = 0.0;
            for (int n = 0; n <= N; ++n) z += cond[n] = std::pow(nu, N - n);
            for (auto& x : cond) x /= z;
        }
        w.p_n_given_N.push_back(std::move(cond));
    }
    w.tail = std::max(0.0, 1.0 - sum);
    if (w.tail >= tol::kTailMass) {
        std::ostringstream os;
        os << "Nmax = " << Nmax << " leaves total-number tail " << w.tail << "; need " << block_cutoff(l1, l2);
        fail(ErrorCode::CutoffTooSmall, os.str());
    }
    return w;
}

double BlockWeights::joint(int n1, int n2) const {
    const int N = n1 + n2;
    require(n1 >= 0 && n2 >= 0 && static_cast<std::size_t>(N) <= Nmax(), ErrorCode::InvalidArgument,
            "(n1, n2) outside the block table");
    return pN[static_cast<std::size_t>(N)] * p_n_given_N[static_cast<std::size_t>(N)][static_cast<std::size_t>(n1)];
}

int block_cutoff(double l1, double l2, double tail) {
    require(l1 >= 0.0 && l1 < 1.0 && l2 >= 0.0 && l2 < 1.0, ErrorCode::InvalidArgument, "lambda must lie in [0, 1)");
    const double norm = (1.0 - l1) * (1.0 - l2);
    double sum = 0.0;
    for (int N = 0; N < 100000; ++N) {
        double s = 0.0;
        for (int n = 0; n <= N; ++n) s += std::pow(l1, n) * std::pow(l2, N - n);
        sum += norm * s;
        if (1.0 - sum < tail) return N;
    }
    fail(ErrorCode::CutoffTooSmall, "no block cutoff below 100000 meets the tail tolerance");
}

BlockMixtureResult evolve_block_mixture(const BlockWeights& w, double Gamma, double nbar, double dt, std::size_t steps) {
    require(dt > 0.0, ErrorCode::InvalidArgument, "dt must be > 0");
    BlockMixtureResult r;
    r.jz.assign(steps + 1, 0.0);
    for (std::size_t k = 0; k <= steps; ++k) r.times.push_back(dt * static_cast<double>(k));
    for (std::size_t N = 0; N < w.pN.size(); ++N) {
        const double pN = w.pN[N];
        if (pN == 0.0) continue;
        const int two_j = static_cast<int>(N);
        const DickeBlock block{two_j, nbar, Gamma};
        const Eigen::MatrixXd q = classical_birth_death(block);
        // n = n1 and m = n - N/2, so index i = m + j = n
        Eigen::VectorXd p(two_j + 1);
        for (int n = 0; n <= two_j; ++n) p(n) = w.p_n_given_N[N][static_cast<std::size_t>(n)];
        const double dN = static_cast<double>(N);
        r.mean_N += pN * dN;
        r.mean_N_N2 += pN * dN * (dN + 2.0);
        double jz2 = 0.0;
        for (int i = 0; i <= two_j; ++i) {
            const double m = -0.5 * two_j + i;
            jz2 += m * m * p(i);
        }
        r.mean_jz2_0 += pN * jz2;
        r.jz_rate0 += pN * birth_death_jz(q * p, two_j);
        const Eigen::MatrixXd step = (q * dt).exp();
        for (std::size_t k = 0; k <= steps; ++k) {
            if (k > 0) p = step * p;
            r.jz[k] += pN * birth_death_jz(p, two_j);
        }
    }
    return r;
}

double jz_initial_mean(double nbar1, double nbar2) { return 0.5 * (nbar1 - nbar2); }

double jz_initial_mean_high_temperature(double x1, double x2) { return 0.5 * (x1 - x2); }

NMoments thermal_N_moments(double n1, double n2) {
    const double mean = n1 + n2;
    return {mean, 2.0 * (n1 * n1 + n2 * n2 + n1 * n2) + mean};
}

double semiclassical_constant(double Gamma, double Nbar, SemiclassicalVariant v) {
    return v == SemiclassicalVariant::Paper ? -1.5 * Gamma * (Nbar + 1.0) : -0.75 * Gamma * (Nbar + 2.0);
}

double semiclassical_rhs(double z, double Gamma, double nbar, double Nbar, SemiclassicalVariant v) {
    require(std::abs(z) <= 1.0, ErrorCode::InvalidArgument, "z must lie in [-1, 1]");
    return semiclassical_constant(Gamma, Nbar, v) + 0.5 * Gamma * Nbar * z * z - Gamma * (2.0 * nbar + 1.0) * z;
}

double su2_jz_rhs(double Gamma, double nbar, double mean_N_N2, double mean_jz2, double mean_jz) {
    return -0.25 * Gamma * mean_N_N2 + Gamma * mean_jz2 - Gamma * (2.0 * nbar + 1.0) * mean_jz;
}

// ---------------------------------------------------------- number probe

MeasuredModel build_number_measurement(const LindbladModel& model, double Lambda, std::size_t site) {
    require_rate(Lambda, "Lambda");
    const HilbertSpace& space = model.space();
    require(site < space.subsystems(), ErrorCode::InvalidArgument, "measured site out of range");
    const Operator n = embed(number(space.dim(site)), site, space);
    // Lambda [n,[n,rho]] = 2 Lambda D[n] rho for Hermitian n
    LindbladModel measured = model.with({"number_dephasing", 2.0 * Lambda, n});
    const double scale = Lambda > 0.0 ? 1.0 / std::sqrt(Lambda) : 1.0;
    return {std::move(measured), {"M", n, Lambda, scale}};
}

} // namespace machclock
