#include "machclock/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace machclock {

namespace {

std::size_t step_count(double dt, double t_final) {
    require(dt > 0.0 && std::isfinite(dt), ErrorCode::InvalidArgument, "dt must be positive");
    require(t_final >= 0.0, ErrorCode::InvalidArgument, "t_final must be >= 0");
    return TimeGrid::span(t_final, dt).steps;
}

bool is_output(std::size_t k, std::size_t steps, std::size_t stride) { return k % stride == 0 || k == steps; }

bool is_diagonal_operator(const Operator& op) {
    const Matrix& m = op.matrix();
    return (m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

double spectral_norm_squared(const Matrix& a) {
    const Matrix ada = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Matrix> es(ada, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

void check_positive(double lmin, double t) {
    if (lmin < tol::kPositivityAbort) {
        std::ostringstream os;
        os << "conditional state eigenvalue " << lmin << " at t = " << t;
        fail(ErrorCode::PositivityViolation, os.str());
    }
}

/// Transition structure of a diagonal-preserving model, as a classical Markov chain.
struct ClassicalChain {
    struct Edge {
        std::size_t to;
        double rate;
        std::size_t dissipator;
    };
    std::vector<std::vector<Edge>> out; // per source state
    std::vector<double> escape;     // total event rate, self-loops included
    std::vector<double> escape_out; // rate of actually leaving the state

    explicit ClassicalChain(const LindbladModel& model) {
        const auto n = static_cast<Eigen::Index>(model.space().total());
        out.resize(static_cast<std::size_t>(n));
        escape.assign(static_cast<std::size_t>(n), 0.0);
        escape_out.assign(static_cast<std::size_t>(n), 0.0);
        const auto& ds = model.dissipators();
        for (std::size_t k = 0; k < ds.size(); ++k) {
            if (ds[k].rate == 0.0) continue;
            const Matrix& a = ds[k].op.matrix();
            for (Eigen::Index c = 0; c < n; ++c)
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double w = ds[k].rate * std::norm(a(r, c));
                    if (w == 0.0) continue;
                    // self-loops leave the diagonal state unchanged but still count as events
                    out[static_cast<std::size_t>(c)].push_back({static_cast<std::size_t>(r), w, k});
                    escape[static_cast<std::size_t>(c)] += w;
                    if (r != c) escape_out[static_cast<std::size_t>(c)] += w;
                }
        }
    }

    void drift(const std::vector<double>& p, std::vector<double>& dp) const {
        std::fill(dp.begin(), dp.end(), 0.0);
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (p[c] == 0.0) continue;
            for (const auto& e : out[c])
                if (e.to != c) dp[e.to] += e.rate * p[c];
            dp[c] -= escape_out[c] * p[c];
        }
    }
};

std::vector<NamedObservable> default_observables(const std::vector<DiffusiveChannel>& channels,
                                                 const TrajectoryOptions& options) {
    if (!options.observables.empty()) return options.observables;
    std::vector<NamedObservable> obs;
    for (const auto& c : channels) obs.push_back({c.name, c.op});
    return obs;
}

} // namespace

void DiffusiveChannel::validate() const {
    require(op.is_hermitian(), ErrorCode::NonHermitian, "channel '" + name + "' observable is not Hermitian");
    require(strength >= 0.0 && std::isfinite(strength), ErrorCode::InvalidArgument,
            "channel '" + name + "' strength must be >= 0");
    require(record_noise_scale > 0.0 && std::isfinite(record_noise_scale), ErrorCode::InvalidArgument,
            "channel '" + name + "' record noise scale must be > 0");
}

const NamedSeries& TrajectoryResult::series(const std::string& name) const {
    for (const auto& s : observables)
        if (s.name == name) return s;
    fail(ErrorCode::InvalidArgument, "no observable named '" + name + "'");
}

const JumpCounter& TrajectoryResult::counter(const std::string& name) const {
    for (const auto& c : jump_counts)
        if (c.name == name) return c;
    fail(ErrorCode::InvalidArgument, "no jump counter named '" + name + "'");
}

// --------------------------------------------------------------- diffusive

TrajectoryResult simulate_diffusive(const LindbladModel& model, const std::vector<DiffusiveChannel>& channels,
                                    const DensityMatrix& rho0, double dt, double t_final, SeedSpec seed,
                                    const TrajectoryOptions& options) {
    require(rho0.space() == model.space(), ErrorCode::SpaceMismatch, "initial state not on model space");
    double max_strength = 0.0;
    for (const auto& c : channels) {
        c.validate();
        require(c.op.space() == model.space(), ErrorCode::SpaceMismatch, "channel '" + c.name + "' not on model space");
        max_strength = std::max(max_strength, c.strength);
    }
    require(options.stride >= 1, ErrorCode::InvalidArgument, "output stride must be >= 1");
    const std::size_t steps = step_count(dt, t_final);
    const double rate = model.max_rate();
    if ((rate + max_strength) * dt > tol::kDiffusiveRateStep) {
        std::ostringstream os;
        os << "(max rate " << rate << " + max strength " << max_strength << ") * dt " << dt << " exceeds "
           << tol::kDiffusiveRateStep;
        fail(ErrorCode::StepTooLarge, os.str());
    }
    const auto observables = default_observables(channels, options);
    for (const auto& o : observables)
        require(o.op.space() == model.space(), ErrorCode::SpaceMismatch, "observable '" + o.name + "' not on model space");

    const bool classical = !options.force_dense && model.preserves_diagonal() && rho0.is_diagonal() &&
                           std::all_of(channels.begin(), channels.end(),
                                       [](const DiffusiveChannel& c) { return is_diagonal_operator(c.op); });

    const CounterRng rng(seed);
    const double sqdt = std::sqrt(dt);
    const std::size_t nc = channels.size();

    TrajectoryResult res;
    res.seed = seed;
    res.scheme = classical ? "euler-maruyama/classical-diagonal" : "euler-maruyama/density-matrix";
    for (const auto& o : observables) res.observables.push_back({o.name, {}});
    for (const auto& c : channels) res.records.push_back({c.name, {}, {}, {}, {}});

    std::vector<double> acc_dy(nc, 0.0), acc_signal(nc, 0.0), acc_w(nc, 0.0), mean(nc), dw(nc);
    auto flush_records = [&](double t) {
        for (std::size_t k = 0; k < nc; ++k) {
            auto& r = res.records[k];
            r.times.push_back(t);
            r.increments.push_back(acc_dy[k]);
            r.signal.push_back(acc_signal[k]);
            r.wiener.push_back(acc_w[k]);
            acc_dy[k] = acc_signal[k] = acc_w[k] = 0.0;
        }
    };
    auto draw = [&](std::size_t k) {
        for (std::size_t c = 0; c < nc; ++c) {
            dw[c] = sqdt * rng.normal(k, static_cast<std::uint32_t>(c));
            acc_dy[c] += mean[c] * dt + channels[c].record_noise_scale * dw[c];
            acc_signal[c] += mean[c] * dt;
            acc_w[c] += dw[c];
        }
    };

    if (classical) {
        const ClassicalChain chain(model);
        const std::size_t n = model.space().total();
        std::vector<double> p(n), dp(n);
        const RealVector pop = rho0.populations();
        for (std::size_t i = 0; i < n; ++i) p[i] = pop(static_cast<Eigen::Index>(i));
        std::vector<std::vector<double>> chan_diag(nc), obs_diag(observables.size());
        for (std::size_t c = 0; c < nc; ++c) {
            const RealVector d = channels[c].op.matrix().diagonal().real();
            chan_diag[c].assign(d.data(), d.data() + d.size());
        }
        for (std::size_t o = 0; o < observables.size(); ++o) {
            const RealVector d = observables[o].op.matrix().diagonal().real();
            obs_diag[o].assign(d.data(), d.data() + d.size());
        }
        auto emit = [&](double t) {
            res.times.push_back(t);
            for (std::size_t o = 0; o < observables.size(); ++o) {
                double v = 0.0;
                for (std::size_t i = 0; i < n; ++i) v += obs_diag[o][i] * p[i];
                res.observables[o].values.push_back(v);
            }
        };
        emit(0.0);
        for (std::size_t k = 0; k < steps; ++k) {
            for (std::size_t c = 0; c < nc; ++c) {
                double m = 0.0;
                for (std::size_t i = 0; i < n; ++i) m += chan_diag[c][i] * p[i];
                mean[c] = m;
            }
            draw(k);
            chain.drift(p, dp);
            double lmin = 1.0, total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double inc = dp[i] * dt;
                // H[A] rho on a diagonal state is 2 (a_i - <A>) p_i
                for (std::size_t c = 0; c < nc; ++c)
                    inc += std::sqrt(channels[c].strength) * 2.0 * (chan_diag[c][i] - mean[c]) * p[i] * dw[c];
                p[i] += inc;
                lmin = std::min(lmin, p[i]);
                total += p[i];
            }
            const double t = dt * static_cast<double>(k + 1);
            check_positive(lmin, t);
            for (auto& x : p) x /= total;
            if (is_output(k + 1, steps, options.stride)) {
                emit(t);
                flush_records(t);
            }
        }
        return res;
    }

    const CompiledGenerator gen(model);
    std::vector<CompiledGenerator::Sparse> ops;
    for (const auto& c : channels) {
        CompiledGenerator::Sparse s = c.op.matrix().sparseView(0.0, 0.0);
        s.makeCompressed();
        ops.push_back(std::move(s));
    }
    Matrix rho = rho0.matrix();
    Matrix drift, next;
    auto emit = [&](double t) {
        res.times.push_back(t);
        for (std::size_t o = 0; o < observables.size(); ++o)
            res.observables[o].values.push_back(
                (rho.transpose().cwiseProduct(observables[o].op.matrix())).sum().real());
    };
    emit(0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        std::vector<Matrix> arho(nc);
        for (std::size_t c = 0; c < nc; ++c) {
            arho[c] = ops[c] * rho;
            mean[c] = arho[c].trace().real();
        }
        draw(k);
        gen.apply(rho, drift);
        next = rho + dt * drift;
        for (std::size_t c = 0; c < nc; ++c) {
            // H[A] rho = A rho + rho A - 2 <A> rho for Hermitian A
            const double coeff = std::sqrt(channels[c].strength) * dw[c];
            next += coeff * (arho[c] + arho[c].adjoint() - 2.0 * mean[c] * rho);
        }
        rho.swap(next);
        symmetrize(rho);
        rho /= rho.trace().real();
        const double t = dt * static_cast<double>(k + 1);
        if (is_output(k + 1, steps, options.stride)) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
            check_positive(es.eigenvalues().minCoeff(), t);
            emit(t);
            flush_records(t);
        }
    }
    return res;
}

// ------------------------------------------------------------------- jumps

TrajectoryResult simulate_jump(const LindbladModel& model, const DensityMatrix& rho0, double dt, double t_final,
                               SeedSpec seed, const TrajectoryOptions& options) {
    require(rho0.space() == model.space(), ErrorCode::SpaceMismatch, "initial state not on model space");
    require(options.stride >= 1, ErrorCode::InvalidArgument, "output stride must be >= 1");
    const std::size_t steps = step_count(dt, t_final);
    for (const auto& o : options.observables)
        require(o.op.space() == model.space(), ErrorCode::SpaceMismatch, "observable '" + o.name + "' not on model space");
    const auto& ds = model.dissipators();
    const CounterRng rng(seed);
    const bool classical = !options.force_dense && model.preserves_diagonal() && rho0.is_diagonal();

    TrajectoryResult res;
    res.seed = seed;
    res.scheme = classical ? "gillespie/classical-diagonal" : "bernoulli/density-matrix";
    for (const auto& o : options.observables) res.observables.push_back({o.name, {}});
    for (const auto& d : ds) res.jump_counts.push_back({d.label, {}});
    std::vector<std::int64_t> counts(ds.size(), 0);
    const double out_dt = dt * static_cast<double>(options.stride);
    auto output_time = [&](std::size_t j) {
        return std::min(t_final, out_dt * static_cast<double>(j));
    };
    const std::size_t n_out = (steps + options.stride - 1) / options.stride + 1;

    if (classical) {
        const ClassicalChain chain(model);
        const std::size_t n = model.space().total();
        const RealVector pop = rho0.populations();
        // initial basis state drawn from the populations, event counter 0
        std::size_t s = 0;
        {
            const double u = rng.uniform(0, 0);
            double acc = 0.0;
            s = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += pop(static_cast<Eigen::Index>(i));
                if (u < acc) {
                    s = i;
                    break;
                }
            }
        }
        std::vector<RealVector> diag;
        for (const auto& o : options.observables) diag.push_back(o.op.matrix().diagonal().real());
        auto emit = [&](double t) {
            res.times.push_back(t);
            for (std::size_t o = 0; o < diag.size(); ++o)
                res.observables[o].values.push_back(diag[o](static_cast<Eigen::Index>(s)));
            for (std::size_t k = 0; k < ds.size(); ++k) res.jump_counts[k].cumulative.push_back(counts[k]);
        };
        double t = 0.0;
        std::size_t next_out = 0;
        for (std::uint64_t event = 1;; ++event) {
            const double escape = chain.escape[s];
            const auto u = rng.uniforms(event, 0);
            const double t_next = escape > 0.0 ? t - std::log(u[0]) / escape : std::numeric_limits<double>::infinity();
            while (next_out < n_out && output_time(next_out) < t_next) emit(output_time(next_out++));
            if (next_out >= n_out) break;
            double target = u[1] * escape, acc = 0.0;
            const auto& edges = chain.out[s];
            std::size_t pick = edges.size() - 1;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                acc += edges[e].rate;
                if (target < acc) {
                    pick = e;
                    break;
                }
            }
            ++counts[edges[pick].dissipator];
            s = edges[pick].to;
            t = t_next;
        }
        return res;
    }

    double bound = 0.0;
    for (const auto& d : ds)
        if (d.rate > 0.0) bound += d.rate * spectral_norm_squared(d.op.matrix());
    if (bound * dt > tol::kJumpProbabilityStep) {
        std::ostringstream os;
        os << "worst-case jump probability per step " << bound * dt << " exceeds " << tol::kJumpProbabilityStep;
        fail(ErrorCode::StepTooLarge, os.str());
    }

    const CompiledGenerator gen(model);
    // dissipators with zero rate are skipped by the generator; map back to labels
    std::vector<std::size_t> jump_index;
    for (std::size_t k = 0; k < ds.size(); ++k)
        if (ds[k].rate != 0.0) jump_index.push_back(k);
    std::vector<CompiledGenerator::Sparse> jdj;
    for (std::size_t j = 0; j < gen.jump_count(); ++j) {
        CompiledGenerator::Sparse m = gen.jump_adjoint(j) * gen.jump(j);
        jdj.push_back(std::move(m));
    }
    Matrix rho = rho0.matrix();
    Matrix drift;
    auto emit = [&](double t) {
        res.times.push_back(t);
        for (std::size_t o = 0; o < options.observables.size(); ++o)
            res.observables[o].values.push_back(
                (rho.transpose().cwiseProduct(options.observables[o].op.matrix())).sum().real());
        for (std::size_t k = 0; k < ds.size(); ++k) res.jump_counts[k].cumulative.push_back(counts[k]);
    };
    emit(0.0);
    std::vector<double> prob(gen.jump_count());
    for (std::size_t k = 0; k < steps; ++k) {
        double total = 0.0;
        for (std::size_t j = 0; j < prob.size(); ++j) {
            prob[j] = (jdj[j] * rho).trace().real() * dt;
            total += prob[j];
        }
        const double u = rng.uniform(k, 0);
        if (u < total) {
            std::size_t pick = prob.size() - 1;
            double acc = 0.0;
            for (std::size_t j = 0; j < prob.size(); ++j) {
                acc += prob[j];
                if (u < acc) {
                    pick = j;
                    break;
                }
            }
            const Matrix jr = gen.jump(pick) * rho;
            rho = jr * gen.jump_adjoint(pick);
            ++counts[jump_index[pick]];
        } else {
            gen.apply_no_jump(rho, drift);
            rho += dt * drift;
        }
        symmetrize(rho);
        rho /= rho.trace().real();
        const double t = dt * static_cast<double>(k + 1);
        if (is_output(k + 1, steps, options.stride)) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
            check_positive(es.eigenvalues().minCoeff(), t);
            emit(t);
        }
    }
    return res;
}

// ---------------------------------------------------------------- z-SDE

ZPaths simulate_z_sde(double z1_0, double z2_0, double gamma, double Gamma, double dt, double t_final, SeedSpec seed,
                      std::size_t stride) {
    require(std::abs(z1_0) <= 1.0 && std::abs(z2_0) <= 1.0, ErrorCode::InvalidArgument, "z0 must lie in [-1, 1]^2");
    require(gamma >= 0.0 && Gamma >= 0.0, ErrorCode::InvalidArgument, "rates must be >= 0");
    require(stride >= 1, ErrorCode::InvalidArgument, "output stride must be >= 1");
    const std::size_t steps = step_count(dt, t_final);
    if (Gamma * dt > tol::kZSdeStep) {
        std::ostringstream os;
        os << "Gamma * dt = " << Gamma * dt << " exceeds " << tol::kZSdeStep;
        fail(ErrorCode::StepTooLarge, os.str());
    }
    const CounterRng rng(seed);
    const double noise = 2.0 * std::sqrt(Gamma) * std::sqrt(dt);
    ZPaths out;
    double z1 = z1_0, z2 = z2_0;
    out.times.push_back(0.0);
    out.z1.push_back(z1);
    out.z2.push_back(z2);
    for (std::size_t k = 0; k < steps; ++k) {
        const double diff = gamma * (z1 - z2) * dt;
        const double w1 = Gamma > 0.0 ? rng.normal(k, 0) : 0.0;
        const double w2 = Gamma > 0.0 ? rng.normal(k, 1) : 0.0;
        const double n1 = z1 - diff + noise * w1 * (1.0 - z1 * z1);
        const double n2 = z2 + diff + noise * w2 * (1.0 - z2 * z2);
        z1 = std::clamp(n1, -1.0, 1.0);
        z2 = std::clamp(n2, -1.0, 1.0);
        if (is_output(k + 1, steps, stride)) {
            out.times.push_back(dt * static_cast<double>(k + 1));
            out.z1.push_back(z1);
            out.z2.push_back(z2);
        }
    }
    return out;
}

// ------------------------------------------------------------- telegraph

int TelegraphRecord::value_at(double t) const {
    const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
    return values[static_cast<std::size_t>(it - switch_times.begin())];
}

double TelegraphRecord::occupancy_up() const {
    if (t_final <= 0.0) return values.front() == 1 ? 1.0 : 0.0;
    double up = 0.0, start = 0.0;
    for (std::size_t i = 0; i <= switch_times.size(); ++i) {
        const double end = i < switch_times.size() ? switch_times[i] : t_final;
        if (values[i] == 1) up += end - start;
        start = end;
    }
    return up / t_final;
}

std::vector<double> TelegraphRecord::dwell_times(int value) const {
    std::vector<double> out;
    for (std::size_t i = 1; i < switch_times.size(); ++i)
        if (values[i] == value) out.push_back(switch_times[i] - switch_times[i - 1]);
    return out;
}

TelegraphRecord simulate_telegraph(double rate_up, double rate_down, double t_final, SeedSpec seed, int initial) {
    require(rate_up >= 0.0 && rate_down >= 0.0, ErrorCode::InvalidArgument, "telegraph rates must be >= 0");
    require(initial == 1 || initial == -1, ErrorCode::InvalidArgument, "telegraph initial value must be +-1");
    require(t_final >= 0.0, ErrorCode::InvalidArgument, "t_final must be >= 0");
    const CounterRng rng(seed);
    TelegraphRecord rec;
    rec.t_final = t_final;
    rec.values.push_back(initial);
    int v = initial;
    double t = 0.0;
    for (std::uint64_t event = 0;; ++event) {
        const double rate = v == -1 ? rate_up : rate_down;
        if (rate == 0.0) break;
        t += rng.exponential(rate, event, 0);
        if (t >= t_final) break;
        v = -v;
        rec.switch_times.push_back(t);
        rec.values.push_back(v);
    }
    return rec;
}

// -------------------------------------------------------------- ensembles

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& work) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    work(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

/// Welford accumulator over trajectories, fed in index order.
class SeriesAccumulator {
public:
    void add(const std::vector<double>& x) {
        if (mean_.empty()) {
            mean_.assign(x.size(), 0.0);
            m2_.assign(x.size(), 0.0);
        }
        require(x.size() == mean_.size(), ErrorCode::InvalidArgument, "trajectory series lengths differ");
        ++n_;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - mean_[i];
            mean_[i] += d / static_cast<double>(n_);
            m2_[i] += d * (x[i] - mean_[i]);
        }
    }

    SeriesStats stats(std::string name) const {
        SeriesStats s{std::move(name), mean_, std::vector<double>(mean_.size(), 0.0)};
        if (n_ > 1)
            for (std::size_t i = 0; i < mean_.size(); ++i)
                s.std_error[i] = std::sqrt(m2_[i] / static_cast<double>(n_ - 1) / static_cast<double>(n_));
        return s;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> mean_, m2_;
};

const SeriesStats& find_stats(const std::vector<SeriesStats>& v, const std::string& name) {
    for (const auto& s : v)
        if (s.name == name) return s;
    fail(ErrorCode::InvalidArgument, "no ensemble series named '" + name + "'");
}

} // namespace

const SeriesStats& EnsembleResult::observable(const std::string& name) const { return find_stats(observables, name); }
const SeriesStats& EnsembleResult::record(const std::string& channel) const {
    return find_stats(record_increments, channel);
}
const SeriesStats& EnsembleResult::jumps(const std::string& name) const { return find_stats(jump_counts, name); }

EnsembleResult ensemble_run(const std::function<TrajectoryResult(SeedSpec)>& simulate, std::size_t n_traj,
                            std::uint64_t master_seed, const EnsembleOptions& options) {
    require(n_traj >= 1, ErrorCode::InvalidArgument, "n_traj must be >= 1");
    EnsembleResult out;
    out.n_traj = n_traj;
    out.master_seed = master_seed;
    std::vector<SeriesAccumulator> obs, rec, jumps;
    std::vector<std::string> obs_names, rec_names, jump_names;

    std::size_t workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.workers;
    const std::size_t chunk = std::max<std::size_t>(64, 8 * workers);
    std::vector<TrajectoryResult> batch;
    for (std::size_t start = 0; start < n_traj; start += chunk) {
        const std::size_t count = std::min(chunk, n_traj - start);
        batch.assign(count, {});
        parallel_for(count, workers, [&](std::size_t i) { batch[i] = simulate({master_seed, start + i}); });
        for (auto& tr : batch) {
            if (obs.empty() && rec.empty() && jumps.empty() && out.times.empty()) {
                out.times = tr.times;
                for (const auto& s : tr.observables) obs_names.push_back(s.name);
                for (const auto& r : tr.records) rec_names.push_back(r.channel_id);
                for (const auto& j : tr.jump_counts) jump_names.push_back(j.name);
                obs.resize(obs_names.size());
                rec.resize(rec_names.size());
                jumps.resize(jump_names.size());
            }
            for (std::size_t i = 0; i < obs.size(); ++i) obs[i].add(tr.observables[i].values);
            for (std::size_t i = 0; i < rec.size(); ++i) rec[i].add(tr.records[i].increments);
            for (std::size_t i = 0; i < jumps.size(); ++i) {
                const auto& c = tr.jump_counts[i].cumulative;
                jumps[i].add(std::vector<double>(c.begin(), c.end()));
            }
            if (options.keep_trajectories) out.trajectories.push_back(std::move(tr));
        }
    }
    for (std::size_t i = 0; i < obs.size(); ++i) out.observables.push_back(obs[i].stats(obs_names[i]));
    for (std::size_t i = 0; i < rec.size(); ++i) out.record_increments.push_back(rec[i].stats(rec_names[i]));
    for (std::size_t i = 0; i < jumps.size(); ++i) out.jump_counts.push_back(jumps[i].stats(jump_names[i]));
    return out;
}

EnsembleResult ensemble_run(const EnsembleJob& job, std::size_t n_traj, std::uint64_t master_seed,
                            const EnsembleOptions& options) {
    return ensemble_run(
        [&job](SeedSpec seed) {
            if (job.kind == EnsembleJob::Kind::Diffusive)
                return simulate_diffusive(job.model, job.channels, job.rho0, job.dt, job.t_final, seed, job.options);
            return simulate_jump(job.model, job.rho0, job.dt, job.t_final, seed, job.options);
        },
        n_traj, master_seed, options);
}

} // namespace machclock
