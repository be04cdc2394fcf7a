#include "adaptct/workflow.hpp"

#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "adaptct/errors.hpp"
#include "adaptct/io.hpp"

namespace adaptct {

void set_max_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

double nrmse(const Volume& x, const Volume& ref) {
    if (!x.same_dims(ref)) throw GeometryError("nrmse: volume dims mismatch");
    double diff2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = double(x.data()[i]) - double(ref.data()[i]);
        diff2 += d * d;
        ref2 += double(ref.data()[i]) * double(ref.data()[i]);
    }
    if (ref2 <= 0.0) throw InvalidInputError("nrmse: reference volume is identically zero");
    return std::sqrt(diff2) / std::sqrt(ref2);
}

SimulatedInstrument::SimulatedInstrument(const Volume& ground_truth, ProjectionGeometry geom,
                                         double i0, bool noiseless, std::uint64_t noise_seed)
    : gt_(ground_truth), geom_(geom), i0_(i0), noiseless_(noiseless), noise_seed_(noise_seed) {
    if (i0 <= 0.0) throw InvalidInputError("SimulatedInstrument: I0 must be positive");
}

CountData SimulatedInstrument::measure(double angle_deg) {
    const Projection proj = forward_project(gt_, angle_deg, geom_);
    if (noiseless_) return quantize_counts(proj, i0_);
    // key the noise stream by the angle itself (millidegrees) so a view's
    // counts do not depend on when it is acquired
    const std::uint64_t angle_key =
        static_cast<std::uint64_t>(std::llround(angle_deg * 1000.0));
    return simulate_counts(proj, i0_, mix_seed(noise_seed_, angle_key));
}

std::string method_name(Method m) {
    switch (m) {
    case Method::Adaptive: return "adaptive";
    case Method::Golden: return "golden";
    case Method::FixedList: return "fixed-list";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "adaptive") return Method::Adaptive;
    if (name == "golden") return Method::Golden;
    if (name == "fixed-list" || name == "fixed") return Method::FixedList;
    throw ConfigError("unknown method '" + name + "' (expected adaptive, golden or fixed-list)");
}

Volume resolve_ground_truth(const ExperimentConfig& config) {
    if (!config.ground_truth_path.empty()) return read_volume_raw(config.ground_truth_path);
    return generate_phantom(config.phantom);
}

std::vector<double> initial_angle_list(const InitialAngles& initial, double grid_step_deg) {
    if (!initial.explicit_list.empty()) return initial.explicit_list;
    if (initial.evenly_spaced_count < 1)
        throw InvalidInputError("initial angle count must be at least 1");
    std::vector<double> out;
    out.reserve(initial.evenly_spaced_count);
    for (int i = 0; i < initial.evenly_spaced_count; ++i) {
        const double raw = i * 180.0 / initial.evenly_spaced_count;
        // snap onto the candidate grid so the bookkeeping stays exact
        const double snapped = std::round(raw / grid_step_deg) * grid_step_deg;
        out.push_back(snapped < 180.0 ? snapped : 0.0);
    }
    return out;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

ExperimentTrace run_experiment(const ExperimentConfig& config, MeasurementSource& source,
                               const Volume& reference) {
    set_max_threads(config.max_threads);
    const ProjectionGeometry& geom = source.geometry();
    const int nz = reference.nz(), nx = reference.nx(), ny = reference.ny();

    AngleState state(config.grid_step_deg);
    const std::vector<double> initial = initial_angle_list(config.initial, config.grid_step_deg);
    if (initial.empty()) throw InvalidInputError("initial angle list must be non-empty");
    if (config.num_views < 1) throw InvalidInputError("number of additional views must be >= 1");

    ExperimentTrace trace;
    std::vector<WeightedProjection> measurements;
    auto acquire = [&](double angle) {
        const CountData counts = source.measure(angle);
        measurements.push_back(counts_to_attenuation(counts, config.measurement.count_clamp));
        state.select(angle);
        trace.selected_angles.push_back(angle);
    };

    for (double a : initial) acquire(a);

    Volume recon_volume;
    ReconReport recon_report;
    auto reconstruct_step = [&](const Volume* init) {
        recon_volume = reconstruct(measurements, geom, nz, nx, ny, init, config.recon, &recon_report);
    };

    auto t0 = std::chrono::steady_clock::now();
    reconstruct_step(nullptr);
    trace.entries.push_back(TraceEntry{0, -1.0, int(measurements.size()),
                                       nrmse(recon_volume, reference), 0.0, elapsed_ms(t0),
                                       recon_report.iterations});
    if (config.save_snapshots) trace.snapshots.push_back(recon_volume);

    long long golden_counter = 0;
    std::size_t fixed_cursor = 0;

    for (int n = 1; n <= config.num_views; ++n) {
        double selection_ms = 0.0;
        double next_angle = -1.0;

        switch (config.method) {
        case Method::Adaptive: {
            auto ts = std::chrono::steady_clock::now();
            SelectionResult sel;
            try {
                sel = select_next_angle(recon_volume, state, config.gamma, config.alpha, config.edges);
            } catch (const ExhaustedCandidatesError&) {
                trace.truncated = true;
                break;
            }
            selection_ms = elapsed_ms(ts);
            next_angle = sel.angle_deg;
            trace.score_tables.push_back(std::move(sel.table));
            break;
        }
        case Method::Golden: {
            auto ts = std::chrono::steady_clock::now();
            // round onto the candidate grid, skipping already-measured angles
            const long long grid_size = state.grid_size();
            for (long long tries = 0; tries < 4 * grid_size + 16; ++tries) {
                double g = golden_ratio_angle(golden_counter++);
                double snapped = std::round(g / config.grid_step_deg) * config.grid_step_deg;
                if (snapped >= 180.0) snapped = 0.0;
                if (!state.is_selected_grid_angle(snapped)) {
                    next_angle = snapped;
                    break;
                }
            }
            selection_ms = elapsed_ms(ts);
            if (next_angle < 0.0) trace.truncated = true;
            break;
        }
        case Method::FixedList: {
            while (fixed_cursor < config.fixed_angles.size() &&
                   state.is_selected_grid_angle(config.fixed_angles[fixed_cursor]))
                ++fixed_cursor;
            if (fixed_cursor >= config.fixed_angles.size()) {
                trace.truncated = true;
                break;
            }
            next_angle = config.fixed_angles[fixed_cursor++];
            break;
        }
        }
        if (trace.truncated) break;

        acquire(next_angle);

        auto tr = std::chrono::steady_clock::now();
        reconstruct_step(&recon_volume);
        const double recon_ms = elapsed_ms(tr);

        trace.entries.push_back(TraceEntry{n, next_angle, int(measurements.size()),
                                           nrmse(recon_volume, reference), selection_ms, recon_ms,
                                           recon_report.iterations});
        if (config.save_snapshots) trace.snapshots.push_back(recon_volume);
    }

    trace.final_recon = std::move(recon_volume);
    return trace;
}

ExperimentTrace run_experiment(const ExperimentConfig& config) {
    const Volume ground_truth = resolve_ground_truth(config);
    const ProjectionGeometry geom = auto_geometry(ground_truth.nx(), ground_truth.ny());
    SimulatedInstrument instrument(ground_truth, geom, config.measurement.i0,
                                   config.measurement.noiseless, config.seed);
    return run_experiment(config, instrument, ground_truth);
}

namespace {

int crossing_views(const ExperimentTrace& trace, double threshold) {
    for (const TraceEntry& e : trace.entries)
        if (e.nrmse < threshold) return e.views_total;
    return -1;
}

bool same_recon_params(const ReconParams& a, const ReconParams& b) {
    return a.beta == b.beta && a.beta_auto_scale == b.beta_auto_scale && a.delta == b.delta &&
           a.max_iterations == b.max_iterations && a.tolerance == b.tolerance &&
           a.nonnegativity == b.nonnegativity;
}

} // namespace

ComparisonResult run_comparison(const ExperimentConfig& a, const ExperimentConfig& b) {
    if (!a.phantom.same_geometry(b.phantom) || a.ground_truth_path != b.ground_truth_path)
        throw InvalidComparisonError("comparison requires a shared phantom");
    if (a.seed != b.seed || a.measurement.i0 != b.measurement.i0 ||
        a.measurement.noiseless != b.measurement.noiseless)
        throw InvalidComparisonError("comparison requires shared noise settings");
    if (!same_recon_params(a.recon, b.recon))
        throw InvalidComparisonError("comparison requires shared reconstruction parameters");
    const std::vector<double> init_a = initial_angle_list(a.initial, a.grid_step_deg);
    const std::vector<double> init_b = initial_angle_list(b.initial, b.grid_step_deg);
    if (init_a != init_b || a.grid_step_deg != b.grid_step_deg)
        throw InvalidComparisonError("comparison requires shared initial angles and grid");

    ComparisonResult result;
    result.trace_a = run_experiment(a);
    result.trace_b = run_experiment(b);
    result.thresholds = a.compare_thresholds;
    for (double t : result.thresholds) {
        result.crossing_views_a.push_back(crossing_views(result.trace_a, t));
        result.crossing_views_b.push_back(crossing_views(result.trace_b, t));
    }
    return result;
}

} // namespace adaptct
