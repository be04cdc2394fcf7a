#include "adaptct/config.hpp"

#include <fstream>

#include "adaptct/errors.hpp"
#include "adaptct/io.hpp"

namespace adaptct {

using nlohmann::json;

namespace {

Shape shape_from_json(const json& j, std::size_t index) {
    Shape s;
    const std::string type = j.value("type", "");
    if (type == "sphere")
        s.kind = Shape::Kind::Sphere;
    else if (type == "box")
        s.kind = Shape::Kind::Box;
    else if (type == "cylinder")
        s.kind = Shape::Kind::Cylinder;
    else if (type == "prism")
        s.kind = Shape::Kind::Prism;
    else
        throw ConfigError("phantom.shapes[" + std::to_string(index) + "]: unknown type '" + type + "'");

    if (!j.contains("center") || !j["center"].is_array() || j["center"].size() != 3)
        throw ConfigError("phantom.shapes[" + std::to_string(index) + "]: center must be [z, x, y]");
    for (int a = 0; a < 3; ++a) s.center[a] = j["center"][a].get<double>();

    s.radius = j.value("radius", 0.0);
    if (j.contains("size")) {
        const auto& sz = j["size"];
        if (!sz.is_array() || sz.size() != 3)
            throw ConfigError("phantom.shapes[" + std::to_string(index) + "]: size must be [sz, sx, sy]");
        for (int a = 0; a < 3; ++a) s.size[a] = sz[a].get<double>();
    }
    s.height = j.value("height", 0.0);
    s.rot_z_deg = j.value("rot_z_deg", 0.0);
    return s;
}

json shape_to_json(const Shape& s) {
    json j;
    switch (s.kind) {
    case Shape::Kind::Sphere: j["type"] = "sphere"; break;
    case Shape::Kind::Box: j["type"] = "box"; break;
    case Shape::Kind::Cylinder: j["type"] = "cylinder"; break;
    case Shape::Kind::Prism: j["type"] = "prism"; break;
    }
    j["center"] = {s.center[0], s.center[1], s.center[2]};
    if (s.kind == Shape::Kind::Sphere || s.kind == Shape::Kind::Cylinder) j["radius"] = s.radius;
    if (s.kind == Shape::Kind::Box || s.kind == Shape::Kind::Prism)
        j["size"] = {s.size[0], s.size[1], s.size[2]};
    if (s.kind == Shape::Kind::Cylinder || s.kind == Shape::Kind::Prism) j["height"] = s.height;
    if (s.rot_z_deg != 0.0) j["rot_z_deg"] = s.rot_z_deg;
    return j;
}

} // namespace

ExperimentConfig config_from_json(const json& doc_in) {
    const json& doc = (doc_in.contains("config") && doc_in.contains("artifacts"))
                          ? doc_in["config"] // run manifest: reuse its resolved config
                          : doc_in;
    ExperimentConfig c;
    try {
        if (doc.contains("phantom")) {
            const json& p = doc["phantom"];
            if (p.contains("dims")) {
                if (!p["dims"].is_array() || p["dims"].size() != 3)
                    throw ConfigError("phantom.dims must be [Nz, Nx, Ny]");
                c.phantom.nz = p["dims"][0].get<int>();
                c.phantom.nx = p["dims"][1].get<int>();
                c.phantom.ny = p["dims"][2].get<int>();
            }
            c.phantom.attenuation_scale = p.value("scale", c.phantom.attenuation_scale);
            c.phantom.seed = p.value("seed", c.phantom.seed);
            if (p.contains("shapes"))
                for (std::size_t i = 0; i < p["shapes"].size(); ++i)
                    c.phantom.shapes.push_back(shape_from_json(p["shapes"][i], i));
        }
        c.ground_truth_path = doc.value("ground_truth_path", std::string{});

        if (doc.contains("initial_angles")) {
            const json& ia = doc["initial_angles"];
            if (ia.is_array())
                c.initial.explicit_list = ia.get<std::vector<double>>();
            else {
                c.initial.evenly_spaced_count = ia.value("count", c.initial.evenly_spaced_count);
                if (ia.contains("list")) c.initial.explicit_list = ia["list"].get<std::vector<double>>();
            }
        }

        c.num_views = doc.value("num_views", c.num_views);
        c.grid_step_deg = doc.value("grid_step_deg", c.grid_step_deg);
        c.gamma = doc.value("gamma", c.gamma);
        c.alpha = doc.value("alpha", c.alpha);

        if (doc.contains("edges")) {
            const json& e = doc["edges"];
            c.edges.cone.epsilon_deg = e.value("cone_epsilon_deg", c.edges.cone.epsilon_deg);
            const std::string mode = e.value("alignment_mode", "cone-axis-candidate");
            if (mode == "cone-axis-candidate")
                c.edges.mode = AlignmentMode::ConeAxisAlongCandidate;
            else if (mode == "segment-gated")
                c.edges.mode = AlignmentMode::SegmentGated;
            else
                throw ConfigError("edges.alignment_mode must be cone-axis-candidate or segment-gated");
            if (e.contains("canny")) {
                const json& cn = e["canny"];
                c.edges.canny.sigma = cn.value("sigma", c.edges.canny.sigma);
                c.edges.canny.high_fraction = cn.value("high_fraction", c.edges.canny.high_fraction);
                c.edges.canny.low_ratio = cn.value("low_ratio", c.edges.canny.low_ratio);
            }
            if (e.contains("ppht")) {
                const json& pp = e["ppht"];
                c.edges.ppht.vote_threshold = pp.value("vote_threshold", c.edges.ppht.vote_threshold);
                c.edges.ppht.min_length = pp.value("min_length", c.edges.ppht.min_length);
                c.edges.ppht.max_gap = pp.value("max_gap", c.edges.ppht.max_gap);
                c.edges.ppht.theta_step_deg = pp.value("theta_step_deg", c.edges.ppht.theta_step_deg);
                c.edges.ppht.rho_step = pp.value("rho_step", c.edges.ppht.rho_step);
                c.edges.ppht.seed = pp.value("seed", c.edges.ppht.seed);
            }
        }

        if (doc.contains("measurement")) {
            const json& m = doc["measurement"];
            c.measurement.i0 = m.value("i0", c.measurement.i0);
            c.measurement.noiseless = m.value("noiseless", c.measurement.noiseless);
            c.measurement.count_clamp = m.value("count_clamp", c.measurement.count_clamp);
        }

        if (doc.contains("recon")) {
            const json& r = doc["recon"];
            c.recon.beta = r.value("beta", c.recon.beta);
            c.recon.beta_auto_scale = r.value("beta_auto_scale", c.recon.beta_auto_scale);
            c.recon.delta = r.value("delta", c.recon.delta);
            c.recon.max_iterations = r.value("max_iterations", c.recon.max_iterations);
            c.recon.tolerance = r.value("tolerance", c.recon.tolerance);
            c.recon.nonnegativity = r.value("nonnegativity", c.recon.nonnegativity);
        }

        c.method = method_from_name(doc.value("method", std::string("adaptive")));
        if (doc.contains("fixed_angles")) c.fixed_angles = doc["fixed_angles"].get<std::vector<double>>();
        c.seed = doc.value("seed", c.seed);
        c.output_dir = doc.value("output_dir", c.output_dir);
        c.max_threads = doc.value("max_threads", c.max_threads);
        c.save_snapshots = doc.value("save_snapshots", c.save_snapshots);
        if (doc.contains("compare")) {
            const json& cmp = doc["compare"];
            if (cmp.contains("nrmse_thresholds"))
                c.compare_thresholds = cmp["nrmse_thresholds"].get<std::vector<double>>();
            c.compare_baseline = cmp.value("baseline_method", c.compare_baseline);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    validate_config(c);
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json doc;
    json phantom;
    phantom["dims"] = {c.phantom.nz, c.phantom.nx, c.phantom.ny};
    phantom["scale"] = c.phantom.attenuation_scale;
    phantom["seed"] = c.phantom.seed;
    phantom["shapes"] = json::array();
    for (const Shape& s : c.phantom.shapes) phantom["shapes"].push_back(shape_to_json(s));
    doc["phantom"] = phantom;
    if (!c.ground_truth_path.empty()) doc["ground_truth_path"] = c.ground_truth_path;

    if (c.initial.explicit_list.empty())
        doc["initial_angles"] = {{"count", c.initial.evenly_spaced_count}};
    else
        doc["initial_angles"] = {{"list", c.initial.explicit_list}};

    doc["num_views"] = c.num_views;
    doc["grid_step_deg"] = c.grid_step_deg;
    doc["gamma"] = c.gamma;
    doc["alpha"] = c.alpha;

    doc["edges"] = {
        {"cone_epsilon_deg", c.edges.cone.epsilon_deg},
        {"alignment_mode",
         c.edges.mode == AlignmentMode::ConeAxisAlongCandidate ? "cone-axis-candidate"
                                                               : "segment-gated"},
        {"canny",
         {{"sigma", c.edges.canny.sigma},
          {"high_fraction", c.edges.canny.high_fraction},
          {"low_ratio", c.edges.canny.low_ratio}}},
        {"ppht",
         {{"vote_threshold", c.edges.ppht.vote_threshold},
          {"min_length", c.edges.ppht.min_length},
          {"max_gap", c.edges.ppht.max_gap},
          {"theta_step_deg", c.edges.ppht.theta_step_deg},
          {"rho_step", c.edges.ppht.rho_step},
          {"seed", c.edges.ppht.seed}}}};

    doc["measurement"] = {{"i0", c.measurement.i0},
                          {"noiseless", c.measurement.noiseless},
                          {"count_clamp", c.measurement.count_clamp}};
    doc["recon"] = {{"beta", c.recon.beta},
                    {"beta_auto_scale", c.recon.beta_auto_scale},
                    {"delta", c.recon.delta},
                    {"max_iterations", c.recon.max_iterations},
                    {"tolerance", c.recon.tolerance},
                    {"nonnegativity", c.recon.nonnegativity}};
    doc["method"] = method_name(c.method);
    if (!c.fixed_angles.empty()) doc["fixed_angles"] = c.fixed_angles;
    doc["seed"] = c.seed;
    if (!c.output_dir.empty()) doc["output_dir"] = c.output_dir;
    doc["max_threads"] = c.max_threads;
    doc["save_snapshots"] = c.save_snapshots;
    doc["compare"] = {{"nrmse_thresholds", c.compare_thresholds},
                      {"baseline_method", c.compare_baseline}};
    return doc;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config file not found: '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // report the line of the parse failure
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
    }
    return config_from_json(doc);
}

void apply_override(json& doc, const std::string& key_value) {
    const std::size_t eq = key_value.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like path.to.key=value: '" + key_value + "'");
    const std::string path = key_value.substr(0, eq);
    const std::string value = key_value.substr(eq + 1);

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ConfigError("override has an empty path component: '" + key_value + "'");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

void validate_config(const ExperimentConfig& c) {
    if (c.ground_truth_path.empty()) {
        if (c.phantom.nz <= 0 || c.phantom.nx <= 0 || c.phantom.ny <= 0)
            throw ConfigError("phantom.dims must be positive");
        if (c.phantom.attenuation_scale <= 0.0) throw ConfigError("phantom.scale must be positive");
    }
    if (c.num_views < 1) throw ConfigError("num_views must be >= 1");
    if (!(c.grid_step_deg > 0.0) || c.grid_step_deg > 180.0)
        throw ConfigError("grid_step_deg must lie in (0, 180]");
    for (double a : c.initial.explicit_list)
        if (!(a >= 0.0 && a < 180.0)) throw ConfigError("initial angles must lie in [0, 180)");
    if (c.initial.explicit_list.empty() && c.initial.evenly_spaced_count < 1)
        throw ConfigError("initial_angles.count must be >= 1");
    if (!(c.edges.cone.epsilon_deg > 0.0 && c.edges.cone.epsilon_deg < 90.0))
        throw ConfigError("edges.cone_epsilon_deg must lie in (0, 90)");
    if (c.measurement.i0 <= 0.0) throw ConfigError("measurement.i0 must be positive");
    if (c.recon.delta <= 0.0) throw ConfigError("recon.delta must be positive");
    if (c.recon.max_iterations < 1) throw ConfigError("recon.max_iterations must be >= 1");
    if (c.recon.tolerance <= 0.0) throw ConfigError("recon.tolerance must be positive");
    if (c.method == Method::FixedList) {
        if (c.fixed_angles.empty()) throw ConfigError("fixed-list method needs fixed_angles");
        for (double a : c.fixed_angles)
            if (!(a >= 0.0 && a < 180.0)) throw ConfigError("fixed_angles must lie in [0, 180)");
    }
    if (c.method == Method::Adaptive || !c.initial.explicit_list.empty()) {
        // duplicate initial angles would break the selected-set invariant
        for (std::size_t i = 0; i < c.initial.explicit_list.size(); ++i)
            for (std::size_t j = i + 1; j < c.initial.explicit_list.size(); ++j)
                if (c.initial.explicit_list[i] == c.initial.explicit_list[j])
                    throw ConfigError("initial angle list contains duplicates");
    }
}

} // namespace adaptct
