#include "adaptct/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <zlib.h>

#include "adaptct/errors.hpp"

namespace adaptct {

namespace {

constexpr char kMagic[4] = {'A', 'V', 'O', 'L'};

void put_u32le(std::ofstream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32le(std::ifstream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

} // namespace

void write_volume_raw(const Volume& v, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os.write(kMagic, 4);
    put_u32le(os, static_cast<std::uint32_t>(v.nz()));
    put_u32le(os, static_cast<std::uint32_t>(v.nx()));
    put_u32le(os, static_cast<std::uint32_t>(v.ny()));
    static_assert(sizeof(float) == 4);
    // volumes are little-endian float32 on every supported platform
    os.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * 4));
    if (!os) throw IoError("failed writing volume to '" + path + "'");
}

Volume read_volume_raw(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open volume file '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("'" + path + "' is not a raw volume file (bad magic)");
    const std::uint32_t nz = get_u32le(is), nx = get_u32le(is), ny = get_u32le(is);
    if (!is || nz == 0 || nx == 0 || ny == 0 || std::uint64_t(nz) * nx * ny > (1ull << 31))
        throw IoError("'" + path + "' has an invalid volume header");
    Volume v(static_cast<int>(nz), static_cast<int>(nx), static_cast<int>(ny));
    is.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * 4));
    if (!is) throw IoError("'" + path + "' is truncated");
    return v;
}

namespace {

void png_chunk(std::ofstream& os, const char type[4], const unsigned char* data, std::size_t len) {
    unsigned char hdr[8] = {
        static_cast<unsigned char>(len >> 24), static_cast<unsigned char>(len >> 16),
        static_cast<unsigned char>(len >> 8),  static_cast<unsigned char>(len),
        static_cast<unsigned char>(type[0]),   static_cast<unsigned char>(type[1]),
        static_cast<unsigned char>(type[2]),   static_cast<unsigned char>(type[3])};
    os.write(reinterpret_cast<const char*>(hdr), 8);
    if (len) os.write(reinterpret_cast<const char*>(data), std::streamsize(len));
    uLong crc = crc32(0L, hdr + 4, 4);
    if (len) crc = crc32(crc, data, uInt(len));
    unsigned char tail[4] = {static_cast<unsigned char>(crc >> 24), static_cast<unsigned char>(crc >> 16),
                             static_cast<unsigned char>(crc >> 8), static_cast<unsigned char>(crc)};
    os.write(reinterpret_cast<const char*>(tail), 4);
}

} // namespace

void write_png_gray8(ImageView img, const std::string& path, float lo, float hi) {
    const int height = img.nx, width = img.ny;
    const float span = hi > lo ? hi - lo : 1.0f;

    std::vector<unsigned char> raw(static_cast<std::size_t>(height) * (width + 1));
    for (int r = 0; r < height; ++r) {
        unsigned char* row = raw.data() + static_cast<std::size_t>(r) * (width + 1);
        row[0] = 0; // no filter
        for (int c = 0; c < width; ++c) {
            const float v = (img.at(r, c) - lo) / span;
            row[1 + c] = static_cast<unsigned char>(std::clamp(v, 0.0f, 1.0f) * 255.0f + 0.5f);
        }
    }
    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<unsigned char> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK)
        throw IoError("PNG compression failed for '" + path + "'");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    const unsigned char sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    os.write(reinterpret_cast<const char*>(sig), 8);
    unsigned char ihdr[13] = {
        static_cast<unsigned char>(width >> 24),  static_cast<unsigned char>(width >> 16),
        static_cast<unsigned char>(width >> 8),   static_cast<unsigned char>(width),
        static_cast<unsigned char>(height >> 24), static_cast<unsigned char>(height >> 16),
        static_cast<unsigned char>(height >> 8),  static_cast<unsigned char>(height),
        8, 0, 0, 0, 0};
    png_chunk(os, "IHDR", ihdr, 13);
    png_chunk(os, "IDAT", compressed.data(), bound);
    png_chunk(os, "IEND", nullptr, 0);
    if (!os) throw IoError("failed writing PNG '" + path + "'");
}

std::pair<float, float> write_volume_slices(const Volume& v, const std::string& dir) {
    std::filesystem::create_directories(dir);
    float lo = v.data()[0], hi = v.data()[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        lo = std::min(lo, v.data()[i]);
        hi = std::max(hi, v.data()[i]);
    }
    char name[32];
    for (int iz = 0; iz < v.nz(); ++iz) {
        std::snprintf(name, sizeof(name), "slice_%03d.png", iz);
        write_png_gray8(v.slice(iz), dir + "/" + name, lo, hi);
    }
    return {lo, hi};
}

std::string format_double(double x) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os.write(content.data(), std::streamsize(content.size()));
    if (!os) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    std::string s((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return s;
}

std::string trace_csv(const ExperimentTrace& trace) {
    std::string out = "step,angle_deg,views,nrmse\n";
    for (const TraceEntry& e : trace.entries) {
        out += std::to_string(e.step);
        out += ',';
        if (e.step > 0) out += format_double(e.angle_deg);
        out += ',';
        out += std::to_string(e.views_total);
        out += ',';
        out += format_double(e.nrmse);
        out += '\n';
    }
    return out;
}

std::string timings_csv(const ExperimentTrace& trace) {
    std::string out = "step,selection_ms,recon_ms,recon_iterations\n";
    for (const TraceEntry& e : trace.entries) {
        out += std::to_string(e.step);
        out += ',';
        out += format_double(e.selection_ms);
        out += ',';
        out += format_double(e.recon_ms);
        out += ',';
        out += std::to_string(e.recon_iterations);
        out += '\n';
    }
    return out;
}

std::string score_table_csv(const ScoreTable& table) {
    std::string out = "angle_deg,f,h,total\n";
    for (const ScoreRow& r : table.rows) {
        out += format_double(r.angle_deg);
        out += ',';
        out += format_double(r.f);
        out += ',';
        out += format_double(r.h);
        out += ',';
        out += format_double(r.total);
        out += '\n';
    }
    return out;
}

std::string angles_txt(const std::vector<double>& angles) {
    std::string out;
    for (double a : angles) {
        out += format_double(a);
        out += '\n';
    }
    return out;
}

RunArtifacts write_run_artifacts(const std::string& dir, const ExperimentTrace& trace) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    RunArtifacts art;
    art.trace_csv = dir + "/trace.csv";
    write_text_file(art.trace_csv, trace_csv(trace));
    art.timings_csv = dir + "/timings.csv";
    write_text_file(art.timings_csv, timings_csv(trace));
    art.angles_txt = dir + "/angles.txt";
    write_text_file(art.angles_txt, angles_txt(trace.selected_angles));
    art.final_volume = dir + "/volume_final.raw";
    write_volume_raw(trace.final_recon, art.final_volume);
    art.slices_dir = dir + "/slices";
    auto [lo, hi] = write_volume_slices(trace.final_recon, art.slices_dir);
    art.norm_lo = lo;
    art.norm_hi = hi;

    if (!trace.score_tables.empty()) {
        fs::create_directories(dir + "/scores");
        char name[32];
        for (std::size_t i = 0; i < trace.score_tables.size(); ++i) {
            std::snprintf(name, sizeof(name), "scores/step_%03d.csv", int(i + 1));
            const std::string path = dir + "/" + name;
            write_text_file(path, score_table_csv(trace.score_tables[i]));
            art.score_tables.push_back(path);
        }
    }
    if (!trace.snapshots.empty()) {
        fs::create_directories(dir + "/snapshots");
        char name[32];
        for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
            std::snprintf(name, sizeof(name), "snapshots/step_%03d.raw", int(i));
            const std::string path = dir + "/" + name;
            write_volume_raw(trace.snapshots[i], path);
            art.snapshot_volumes.push_back(path);
        }
    }
    return art;
}

} // namespace adaptct
