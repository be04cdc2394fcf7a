#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adaptct/selection.hpp"
#include "adaptct/volume.hpp"
#include "adaptct/workflow.hpp"

namespace adaptct {

// Raw volume format: 16-byte header (magic "AVOL", then Nz, Nx, Ny as
// little-endian int32) followed by little-endian float32 voxels in z-major,
// then x, then y order.

void write_volume_raw(const Volume& v, const std::string& path);
Volume read_volume_raw(const std::string& path);

/// 8-bit grayscale PNG of one slice; values mapped linearly from [lo, hi].
void write_png_gray8(ImageView img, const std::string& path, float lo, float hi);

/// Min-max normalized per-slice PNGs (slice_000.png, ...) into a directory.
/// Returns the (lo, hi) normalization actually used.
std::pair<float, float> write_volume_slices(const Volume& v, const std::string& dir);

/// Locale-independent shortest round-trip formatting (dot decimal separator).
std::string format_double(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string trace_csv(const ExperimentTrace& trace);
std::string timings_csv(const ExperimentTrace& trace);
std::string score_table_csv(const ScoreTable& table);
std::string angles_txt(const std::vector<double>& angles);

/// Artifact paths produced by write_run_artifacts.
struct RunArtifacts {
    std::string trace_csv;
    std::string timings_csv;
    std::string angles_txt;
    std::string final_volume;
    std::string slices_dir;
    std::vector<std::string> score_tables;
    std::vector<std::string> snapshot_volumes;
    float norm_lo = 0.0f;
    float norm_hi = 0.0f;
};

/// Write every artifact of a finished run under dir (created if needed).
RunArtifacts write_run_artifacts(const std::string& dir, const ExperimentTrace& trace);

} // namespace adaptct
