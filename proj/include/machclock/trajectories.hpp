#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "machclock/dynamics.hpp"
#include "machclock/rng.hpp"

namespace machclock {

/// Continuous weak measurement of a Hermitian observable.
/// Conditional update: sqrt(strength) * H[op] rho dW.  Record: dy = <op>_c dt + record_noise_scale * dW.
struct DiffusiveChannel {
    std::string name;
    Operator op;
    double strength = 0.0;
    double record_noise_scale = 1.0;

    void validate() const;
};

/// Record increments accumulated over each output interval.
struct MeasurementRecord {
    std::string channel_id;
    std::vector<double> times;      // interval end points
    std::vector<double> increments; // dy over the interval
    std::vector<double> signal;     // integral of <op>_c dt over the interval
    std::vector<double> wiener;     // sum of the dW actually drawn over the interval
};

struct JumpCounter {
    std::string name;
    std::vector<std::int64_t> cumulative; // one per output time
};

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<NamedSeries> observables;
    std::vector<MeasurementRecord> records;
    std::vector<JumpCounter> jump_counts;
    SeedSpec seed;
    std::string scheme;

    const NamedSeries& series(const std::string& name) const;
    const JumpCounter& counter(const std::string& name) const;
};

struct TrajectoryOptions {
    /// Output every `stride` integration steps; records accumulate over the same interval.
    std::size_t stride = 1;
    /// Conditional expectations to report; diffusive runs default to the channel observables.
    std::vector<NamedObservable> observables;
    /// Disable the classical-diagonal fast path (for cross-checks).
    bool force_dense = false;
};

/// Euler-Maruyama stochastic master equation. The model must already contain the
/// measurement back-action dissipators (the unconditional master equation).
TrajectoryResult simulate_diffusive(const LindbladModel& model, const std::vector<DiffusiveChannel>& channels,
                                    const DensityMatrix& rho0, double dt, double t_final, SeedSpec seed,
                                    const TrajectoryOptions& options = {});

/// Jump unraveling. Diagonal states under diagonal-preserving models use exact Gillespie
/// sampling; everything else uses per-step Bernoulli jumps with no-jump evolution.
TrajectoryResult simulate_jump(const LindbladModel& model, const DensityMatrix& rho0, double dt, double t_final,
                               SeedSpec seed, const TrajectoryOptions& options = {});

struct ZPaths {
    std::vector<double> times;
    std::vector<double> z1;
    std::vector<double> z2;
};

/// Reduced two-qubit conditional SDEs:
/// dz1 = -gamma (z1 - z2) dt + 2 sqrt(Gamma) (1 - z1^2) dW1, dz2 = +gamma (z1 - z2) dt + 2 sqrt(Gamma) (1 - z2^2) dW2.
ZPaths simulate_z_sde(double z1_0, double z2_0, double gamma, double Gamma, double dt, double t_final, SeedSpec seed,
                      std::size_t stride = 1);

/// Piecewise-constant +-1 signal with exact exponential dwell times.
struct TelegraphRecord {
    double t_final = 0.0;
    std::vector<double> switch_times; // times at which the value changes
    std::vector<int> values;          // values[0] holds on [0, switch_times[0]), values[i] after switch i-1

    int value_at(double t) const;
    /// Fraction of [0, t_final] spent at +1.
    double occupancy_up() const;
    /// Completed dwell intervals spent at `value` (censored first/last intervals excluded).
    std::vector<double> dwell_times(int value) const;
};

/// rate_up: -1 -> +1, rate_down: +1 -> -1.
TelegraphRecord simulate_telegraph(double rate_up, double rate_down, double t_final, SeedSpec seed, int initial = -1);

// ------------------------------------------------------------------ ensembles

struct EnsembleJob {
    enum class Kind { Diffusive, Jump };
    Kind kind = Kind::Diffusive;
    LindbladModel model;
    std::vector<DiffusiveChannel> channels;
    DensityMatrix rho0;
    double dt = 0.0;
    double t_final = 0.0;
    TrajectoryOptions options;
};

struct SeriesStats {
    std::string name;
    std::vector<double> mean;
    std::vector<double> std_error;
};

struct EnsembleResult {
    std::vector<double> times;
    std::size_t n_traj = 0;
    std::uint64_t master_seed = 0;
    std::vector<SeriesStats> observables;
    std::vector<SeriesStats> record_increments; // per channel, per output interval
    std::vector<SeriesStats> jump_counts;       // cumulative counts per dissipator
    std::vector<TrajectoryResult> trajectories; // kept when requested

    const SeriesStats& observable(const std::string& name) const;
    const SeriesStats& record(const std::string& channel) const;
    const SeriesStats& jumps(const std::string& name) const;
};

struct EnsembleOptions {
    std::size_t workers = 0; // 0 = hardware concurrency
    bool keep_trajectories = false;
};

/// Runs trajectories SeedSpec(master_seed, i) for i < n_traj; reduction is in index order,
/// so the result is bit-identical for any worker count.
EnsembleResult ensemble_run(const EnsembleJob& job, std::size_t n_traj, std::uint64_t master_seed,
                            const EnsembleOptions& options = {});

/// Generic form: any seeded trajectory producer.
EnsembleResult ensemble_run(const std::function<TrajectoryResult(SeedSpec)>& simulate, std::size_t n_traj,
                            std::uint64_t master_seed, const EnsembleOptions& options = {});

/// Runs `work(i)` for i < n on a worker pool; `work` must only write to slot i.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& work);

} // namespace machclock
