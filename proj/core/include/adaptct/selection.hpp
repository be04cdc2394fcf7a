#pragma once

#include <span>
#include <vector>

#include "adaptct/angles.hpp"
#include "adaptct/edges.hpp"
#include "adaptct/volume.hpp"

namespace adaptct {

/// Selected angles plus the discretized candidate grid they were drawn from.
/// Grid membership is tracked by index so remaining() is exact.
class AngleState {
public:
    AngleState() = default;
    AngleState(double grid_step_deg, std::span<const double> initial_selected = {});

    double grid_step_deg() const { return step_; }
    int grid_size() const { return static_cast<int>(measured_.size()); }
    double grid_angle(int index) const { return index * step_; }

    const std::vector<double>& selected() const { return selected_; }
    /// Candidate angles not yet selected, ascending.
    std::vector<double> remaining() const;
    bool is_selected_grid_angle(double angle_deg) const;

    /// Record a selection.  On-grid angles are removed from the candidate
    /// set; off-grid angles only join the selected list.  Throws
    /// InvalidInputError on duplicates or angles outside [0, 180).
    void select(double angle_deg);

private:
    int grid_index_of(double angle_deg) const; // -1 when off-grid

    double step_ = 1.0;
    std::vector<double> selected_;
    std::vector<std::uint8_t> measured_;
};

/// exp(-alpha * sum_j 1 / d(theta, theta_j)); 0 when theta coincides with a
/// selected angle.
double angle_spacing_unnormalized(double theta_deg, std::span<const double> selected,
                                  double alpha);

struct AngleSpacingResult {
    std::vector<double> angles_deg;
    std::vector<double> h; // normalized so the max over candidates is 1
};

/// Angle spacing values over a candidate list, normalized over that list.
AngleSpacingResult angle_spacing_table(std::span<const double> candidates_deg,
                                       std::span<const double> selected,
                                       double alpha);

struct ScoreRow {
    double angle_deg = 0;
    double f = 0;
    double h = 0;
    double total = 0;
};

struct ScoreTable {
    std::vector<ScoreRow> rows; // ascending by angle
    double gamma = 1.0;
    double alpha = 1.0;
    int argmax_index = -1;

    double selected_angle() const { return rows[argmax_index].angle_deg; }
};

struct SelectionResult {
    double angle_deg = 0;
    ScoreTable table;
};

/// Single-step selection: evaluate f over the remaining candidates from the
/// previous reconstruction, h against the selected angles, and return the
/// argmax of f + gamma * h (ties broken by the smallest angle).
/// Throws ExhaustedCandidatesError when no candidates remain.
SelectionResult select_next_angle(const Volume& prev_recon, const AngleState& state,
                                  double gamma, double alpha, const EdgeParams& edge_params);

/// Golden-angle schedule (n * 180 / phi) mod 180, phi the golden ratio.
double golden_ratio_angle(long long n);

} // namespace adaptct
