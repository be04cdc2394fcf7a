#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adaptct/edges.hpp"
#include "adaptct/measurement.hpp"
#include "adaptct/phantom.hpp"
#include "adaptct/recon.hpp"
#include "adaptct/selection.hpp"

namespace adaptct {

/// Cap on worker threads used by parallel loops (0 = hardware default).
void set_max_threads(int n);

/// ||x - ref||_2 / ||ref||_2 over all voxels.
double nrmse(const Volume& x, const Volume& ref);

/// Acquisition abstraction: the closed loop only asks for counts at an
/// angle, so a real instrument could stand in for the simulator.
class MeasurementSource {
public:
    virtual ~MeasurementSource() = default;
    virtual CountData measure(double angle_deg) = 0;
    virtual const ProjectionGeometry& geometry() const = 0;
};

/// Forward projection of a ground-truth volume plus Poisson counting.
/// Noise is keyed by (angle, slice) so a view's counts do not depend on
/// when it is acquired.
class SimulatedInstrument : public MeasurementSource {
public:
    SimulatedInstrument(const Volume& ground_truth, ProjectionGeometry geom,
                        double i0, bool noiseless, std::uint64_t noise_seed);

    CountData measure(double angle_deg) override;
    const ProjectionGeometry& geometry() const override { return geom_; }

private:
    const Volume& gt_;
    ProjectionGeometry geom_;
    double i0_;
    bool noiseless_;
    std::uint64_t noise_seed_;
};

enum class Method { Adaptive, Golden, FixedList };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct InitialAngles {
    int evenly_spaced_count = 3;       // used when explicit_list is empty
    std::vector<double> explicit_list; // degrees in [0, 180)
};

struct MeasurementParams {
    double i0 = 10000.0;
    bool noiseless = false;
    double count_clamp = 1.0; // c_min for counts_to_attenuation
};

struct ExperimentConfig {
    PhantomSpec phantom;
    std::string ground_truth_path; // non-empty: load instead of generating

    InitialAngles initial;
    int num_views = 17;            // additional views beyond the initial set
    double grid_step_deg = 1.0;
    double gamma = 1.0;
    double alpha = 1.0;
    EdgeParams edges;
    MeasurementParams measurement;
    ReconParams recon;
    Method method = Method::Adaptive;
    std::vector<double> fixed_angles; // FixedList schedule
    std::uint64_t seed = 1234;
    std::string output_dir;
    int max_threads = 0;
    bool save_snapshots = false;
    std::vector<double> compare_thresholds{0.3, 0.2, 0.1};
    std::string compare_baseline = "golden";
};

struct TraceEntry {
    int step = 0;            // 0 = initial reconstruction
    double angle_deg = -1.0; // angle acquired at this step; < 0 for step 0
    int views_total = 0;
    double nrmse = 0.0;
    double selection_ms = 0.0;
    double recon_ms = 0.0;
    int recon_iterations = 0;
};

struct ExperimentTrace {
    std::vector<TraceEntry> entries;
    std::vector<ScoreTable> score_tables; // one per adaptive step
    std::vector<double> selected_angles;  // acquisition order, initial first
    Volume final_recon;
    std::vector<Volume> snapshots; // per-step reconstructions when requested
    bool truncated = false;        // candidate grid exhausted before num_views
};

/// Resolve the ground-truth volume named by the config.
Volume resolve_ground_truth(const ExperimentConfig& config);

/// Initial angle list: the explicit list, or k angles evenly spaced over
/// [0, 180) snapped to the candidate grid.
std::vector<double> initial_angle_list(const InitialAngles& initial, double grid_step_deg);

/// Closed acquisition loop: initial reconstruction, then repeatedly select
/// an angle (adaptive objective, golden ratio, or a fixed schedule), acquire
/// counts, and reconstruct with warm start.  NRMSE is tracked against the
/// ground truth after every reconstruction.
ExperimentTrace run_experiment(const ExperimentConfig& config);

/// Same loop against a caller-supplied source (also used internally).
ExperimentTrace run_experiment(const ExperimentConfig& config, MeasurementSource& source,
                               const Volume& reference);

struct ComparisonResult {
    ExperimentTrace trace_a;
    ExperimentTrace trace_b;
    std::vector<double> thresholds;
    std::vector<int> crossing_views_a; // first view count with NRMSE below threshold, -1 = never
    std::vector<int> crossing_views_b;
};

/// Paired run with matched phantom, noise and reconstruction settings.
/// Throws InvalidComparisonError when the shared fields differ.
ComparisonResult run_comparison(const ExperimentConfig& a, const ExperimentConfig& b);

} // namespace adaptct
