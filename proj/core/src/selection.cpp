#include "adaptct/selection.hpp"

#include <algorithm>
#include <cmath>

#include "adaptct/errors.hpp"

namespace adaptct {

AngleState::AngleState(double grid_step_deg, std::span<const double> initial_selected)
    : step_(grid_step_deg) {
    if (!(grid_step_deg > 0.0) || grid_step_deg > 180.0)
        throw InvalidInputError("candidate grid step must lie in (0, 180]");
    const int n = static_cast<int>(std::lround(180.0 / grid_step_deg));
    if (n < 1 || std::fabs(n * grid_step_deg - 180.0) > 1e-9)
        throw InvalidInputError("candidate grid step must divide 180 degrees");
    measured_.assign(static_cast<std::size_t>(n), 0);
    for (double a : initial_selected) select(a);
}

int AngleState::grid_index_of(double angle_deg) const {
    const double q = angle_deg / step_;
    const long long i = std::llround(q);
    if (std::fabs(q - double(i)) > 1e-9) return -1;
    if (i < 0 || i >= grid_size()) return -1;
    return static_cast<int>(i);
}

bool AngleState::is_selected_grid_angle(double angle_deg) const {
    const int i = grid_index_of(angle_deg);
    return i >= 0 && measured_[i];
}

std::vector<double> AngleState::remaining() const {
    std::vector<double> out;
    out.reserve(measured_.size());
    for (int i = 0; i < grid_size(); ++i)
        if (!measured_[i]) out.push_back(grid_angle(i));
    return out;
}

void AngleState::select(double angle_deg) {
    if (!(angle_deg >= 0.0 && angle_deg < 180.0))
        throw InvalidInputError("selected angle must lie in [0, 180)");
    for (double a : selected_)
        if (a == angle_deg) throw InvalidInputError("angle already selected");
    const int i = grid_index_of(angle_deg);
    if (i >= 0) {
        if (measured_[i]) throw InvalidInputError("grid angle already selected");
        measured_[i] = 1;
    }
    selected_.push_back(angle_deg);
}

double angle_spacing_unnormalized(double theta_deg, std::span<const double> selected,
                                  double alpha) {
    double sum = 0.0;
    for (double s : selected) {
        const double d = angular_distance_deg(theta_deg, s);
        if (d <= 0.0) return 0.0; // coincides with a measured angle
        sum += 1.0 / d;
    }
    return std::exp(-alpha * sum);
}

AngleSpacingResult angle_spacing_table(std::span<const double> candidates_deg,
                                       std::span<const double> selected,
                                       double alpha) {
    AngleSpacingResult result;
    result.angles_deg.assign(candidates_deg.begin(), candidates_deg.end());
    result.h.resize(candidates_deg.size());
    double max_h = 0.0;
    for (std::size_t j = 0; j < candidates_deg.size(); ++j) {
        result.h[j] = angle_spacing_unnormalized(candidates_deg[j], selected, alpha);
        max_h = std::max(max_h, result.h[j]);
    }
    if (max_h > 0.0)
        for (double& h : result.h) h /= max_h;
    return result;
}

SelectionResult select_next_angle(const Volume& prev_recon, const AngleState& state,
                                  double gamma, double alpha, const EdgeParams& edge_params) {
    const std::vector<double> candidates = state.remaining();
    if (candidates.empty())
        throw ExhaustedCandidatesError("no candidate angles remain on the grid");

    const EdgeAlignmentResult fa = edge_alignment_table(prev_recon, candidates, edge_params);
    const AngleSpacingResult hs = angle_spacing_table(candidates, state.selected(), alpha);

    SelectionResult result;
    result.table.gamma = gamma;
    result.table.alpha = alpha;
    result.table.rows.resize(candidates.size());
    int best = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        ScoreRow& row = result.table.rows[j];
        row.angle_deg = candidates[j];
        row.f = fa.f[j];
        row.h = hs.h[j];
        row.total = row.f + gamma * row.h;
        if (row.total > result.table.rows[best].total) best = static_cast<int>(j);
    }
    result.table.argmax_index = best;
    result.angle_deg = result.table.rows[best].angle_deg;
    return result;
}

double golden_ratio_angle(long long n) {
    if (n < 0) throw InvalidInputError("golden_ratio_angle: n must be non-negative");
    constexpr double kGoldenRatio = 1.6180339887498948482;
    return std::fmod(double(n) * (180.0 / kGoldenRatio), 180.0);
}

} // namespace adaptct
