#include "mvdm/model_io.hpp"

#include "mvdm/csv.hpp"

#include <json.hpp>

#include <fstream>

namespace mvdm {

namespace {

KernelKind kind_from_string(const std::string& s) {
    if (s == "gaussian") return KernelKind::gaussian;
    if (s == "laplacian") return KernelKind::laplacian;
    if (s == "correlation") return KernelKind::correlation;
    if (s == "custom") return KernelKind::custom;
    throw invalid_input("unknown kernel kind: " + s);
}

} // namespace

void save_model(const std::filesystem::path& dir, const SavedModel& bundle) {
    std::filesystem::create_directories(dir);
    const SpectralModel& m = bundle.model;

    csv::write_matrix(dir / "eigenvalues.csv", m.eigenvalues);
    csv::write_matrix(dir / "psi.csv", m.psi);
    csv::write_matrix(dir / "phi.csv", m.phi);
    csv::write_matrix(dir / "degrees.csv", m.degrees);
    std::vector<int> flags(m.trivial_flags.begin(), m.trivial_flags.end());
    csv::write_labels(dir / "trivial.csv", flags);
    for (std::size_t l = 0; l < bundle.train_views.size(); ++l)
        csv::write_matrix(dir / ("view_" + std::to_string(l + 1) + ".csv"),
                          bundle.train_views[l].data);

    nlohmann::json cfg;
    cfg["method"] = bundle.method;
    cfg["t"] = bundle.t;
    cfg["delta"] = bundle.delta;
    cfg["seed"] = bundle.seed;
    cfg["n_views"] = m.n_views;
    cfg["points_per_view"] = m.points_per_view;
    cfg["truncated"] = m.truncated;
    cfg["sigmas"] = bundle.sigmas;
    std::vector<std::string> kinds;
    for (KernelKind k : bundle.kinds) kinds.emplace_back(to_string(k));
    cfg["kernels"] = kinds;
    csv::write_text(dir / "config.json", cfg.dump(2) + "\n");
}

SavedModel load_model(const std::filesystem::path& dir) {
    const auto cfg_path = dir / "config.json";
    std::ifstream in(cfg_path);
    if (!in) throw invalid_input("cannot open model config: " + cfg_path.string());
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input("malformed model config " + cfg_path.string() + ": " + e.what());
    }

    SavedModel bundle;
    bundle.method = cfg.at("method").get<std::string>();
    bundle.t = cfg.at("t").get<int>();
    bundle.delta = cfg.at("delta").get<double>();
    bundle.seed = cfg.at("seed").get<std::uint64_t>();
    bundle.sigmas = cfg.at("sigmas").get<std::vector<double>>();
    for (const auto& k : cfg.at("kernels"))
        bundle.kinds.push_back(kind_from_string(k.get<std::string>()));

    SpectralModel& m = bundle.model;
    m.n_views = cfg.at("n_views").get<int>();
    m.points_per_view = cfg.at("points_per_view").get<Index>();
    m.truncated = cfg.at("truncated").get<bool>();
    m.eigenvalues = csv::read_matrix(dir / "eigenvalues.csv");
    m.psi = csv::read_matrix(dir / "psi.csv");
    m.phi = csv::read_matrix(dir / "phi.csv");
    m.degrees = csv::read_matrix(dir / "degrees.csv");
    const std::vector<int> flags = csv::read_labels(dir / "trivial.csv");
    m.trivial_flags.assign(flags.begin(), flags.end());

    require(m.psi.rows() == m.n_views * m.points_per_view &&
                m.psi.cols() == m.eigenvalues.size() &&
                m.phi.rows() == m.psi.rows() && m.phi.cols() == m.psi.cols() &&
                m.degrees.size() == m.psi.rows() &&
                static_cast<Index>(m.trivial_flags.size()) == m.eigenvalues.size(),
            "model bundle " + dir.string() + " has inconsistent shapes");

    for (int l = 1; l <= m.n_views; ++l) {
        const auto path = dir / ("view_" + std::to_string(l) + ".csv");
        if (!std::filesystem::exists(path)) break;
        bundle.train_views.push_back(ViewMatrix{csv::read_matrix(path), l});
    }
    return bundle;
}

} // namespace mvdm
