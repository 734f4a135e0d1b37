#include "mvdm/cli.hpp"

#include "mvdm/bench.hpp"
#include "mvdm/csv.hpp"
#include "mvdm/embedding.hpp"
#include "mvdm/evaluation.hpp"
#include "mvdm/extension.hpp"
#include "mvdm/kernels.hpp"
#include "mvdm/model_io.hpp"
#include "mvdm/operators.hpp"
#include "mvdm/spectral.hpp"
#include "mvdm/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace mvdm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Shared view/kernel configuration
// ---------------------------------------------------------------------------

struct ViewOptions {
    std::vector<std::string> view_paths;
    bool header = false;
    std::vector<std::string> kernels; // one name, or one per view
    std::string sigma = "auto:maxmin";
    double maxmin_c = 1.0;
};

void add_view_options(CLI::App* cmd, ViewOptions& opts, std::size_t min_views = 1) {
    cmd->add_option("--views", opts.view_paths, "view CSV files, one per view (row k = sample k)")
        ->required()
        ->expected(static_cast<int>(min_views), -1);
    cmd->add_flag("--header", opts.header, "skip one header line when reading view CSVs");
    cmd->add_option("--kernel", opts.kernels,
                    "kernel kind: gaussian|laplacian|correlation (one value, or one per view)");
    cmd->add_option("--sigma", opts.sigma,
                    "bandwidths: 'auto:maxmin', 'auto:scan' or comma-separated values per view");
    cmd->add_option("--c", opts.maxmin_c, "max-min bandwidth constant C (used by auto:maxmin)");
}

ViewSet load_views(const ViewOptions& opts) {
    ViewSet set;
    for (std::size_t l = 0; l < opts.view_paths.size(); ++l)
        set.views.push_back(
            ViewMatrix{csv::read_matrix(opts.view_paths[l], opts.header), static_cast<int>(l) + 1});
    validate_view_set(set);
    return set;
}

KernelKind parse_kind(const std::string& name) {
    if (name == "gaussian") return KernelKind::gaussian;
    if (name == "laplacian") return KernelKind::laplacian;
    if (name == "correlation") return KernelKind::correlation;
    throw invalid_input("unknown kernel kind '" + name +
                        "' (expected gaussian, laplacian or correlation)");
}

std::vector<KernelKind> resolve_kinds(const ViewOptions& opts, int n_views) {
    std::vector<KernelKind> kinds;
    if (opts.kernels.empty()) {
        kinds.assign(static_cast<std::size_t>(n_views), KernelKind::gaussian);
    } else if (opts.kernels.size() == 1) {
        kinds.assign(static_cast<std::size_t>(n_views), parse_kind(opts.kernels.front()));
    } else {
        require(opts.kernels.size() == static_cast<std::size_t>(n_views),
                "--kernel needs one value or one per view");
        for (const auto& name : opts.kernels) kinds.push_back(parse_kind(name));
    }
    return kinds;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw invalid_input(std::string(what) + ": '" + token + "' is not a number");
        }
    }
    require(!values.empty(), std::string(what) + ": empty list");
    return values;
}

std::vector<double> resolve_sigmas(const ViewOptions& opts, const ViewSet& views,
                                   const std::vector<KernelKind>& kinds) {
    const int n_views = views.count();
    if (opts.sigma == "auto:maxmin") {
        std::vector<double> sigmas;
        for (const auto& v : views.views)
            sigmas.push_back(std::sqrt(max_min_bandwidth(v, opts.maxmin_c)));
        return sigmas;
    }
    if (opts.sigma == "auto:scan") {
        for (KernelKind k : kinds)
            require(k == KernelKind::gaussian, "auto:scan bandwidths require Gaussian kernels");
        std::vector<std::vector<double>> grids;
        for (const auto& v : views.views) grids.push_back(default_scan_grid(v));
        return bandwidth_scan(views, grids).selected_sigma;
    }
    std::vector<double> sigmas = parse_double_list(opts.sigma, "--sigma");
    require(sigmas.size() == static_cast<std::size_t>(n_views),
            "--sigma needs one value per view (" + std::to_string(n_views) + ")");
    for (double s : sigmas) require(s > 0.0, "--sigma values must be positive");
    return sigmas;
}

std::vector<KernelMatrix> build_kernels(const ViewSet& views, const std::vector<KernelKind>& kinds,
                                        const std::vector<double>& sigmas) {
    std::vector<KernelMatrix> kernels;
    for (std::size_t l = 0; l < views.views.size(); ++l)
        kernels.push_back(make_kernel(views.views[l], kinds[l], sigmas[l]));
    return kernels;
}

// ---------------------------------------------------------------------------
// Method dispatch shared by embed / cluster / classify
// ---------------------------------------------------------------------------

struct MethodOptions {
    std::string method = "multiview";
    int t = 1;
    double delta = 0.05;
    double alpha = 0.5;
    double gamma = 0.01;
    int components = 2;
    int r = 0; // 0 = use r(delta)
};

void add_method_options(CLI::App* cmd, MethodOptions& opts) {
    cmd->add_option("--method", opts.method,
                    "multiview|single|kernel_product|kernel_sum|desa|kcca|alternating|"
                    "generalized_alpha")
        ->required();
    cmd->add_option("--t", opts.t, "diffusion time (default 1)");
    cmd->add_option("--delta", opts.delta, "spectral truncation accuracy in (0,1), default 0.05");
    cmd->add_option("--alpha", opts.alpha, "within-view bias for generalized_alpha");
    cmd->add_option("--gamma", opts.gamma, "KCCA regularization");
    cmd->add_option("--components", opts.components, "components for kcca/desa");
    cmd->add_option("--r", opts.r, "cap the embedding dimension (default: from delta)");
}

struct MethodOutput {
    std::vector<Matrix> coords; // one per view, or a single sample-level map
    bool per_view = false;
    bool has_model = false;
    SpectralModel model;
    Matrix operator_matrix; // row-stochastic operator for --dump-operator
    int r = 0;
};

Matrix cap_columns(const Matrix& m, int r_cap) {
    if (r_cap <= 0 || r_cap >= m.cols()) return m;
    return m.leftCols(r_cap);
}

MethodOutput compute_method(const std::string& method, const ViewSet& views,
                            const std::vector<KernelMatrix>& kernels, const MethodOptions& mo) {
    const int n_views = views.count();
    MethodOutput out;

    auto embed_from_model = [&](const SpectralModel& model) {
        const Embedding emb = multiview_embed(model, mo.t, mo.delta);
        out.model = model;
        out.has_model = true;
        out.per_view = model.n_views > 1;
        for (const Matrix& c : emb.per_view_coords) out.coords.push_back(cap_columns(c, mo.r));
        out.r = static_cast<int>(out.coords.front().cols());
    };

    if (method == "multiview") {
        require(n_views >= 2, "multiview method needs at least two views");
        MultiViewOperator op = assemble_multiview(kernels);
        out.operator_matrix = op.phat;
        embed_from_model(decompose(op));
    } else if (method == "single") {
        require(n_views == 1, "single method takes exactly one view");
        StochasticOperator op = single_view_operator(kernels.front());
        out.operator_matrix = op.matrix;
        embed_from_model(decompose(op));
    } else if (method == "kernel_product") {
        StochasticOperator op = kernel_product(kernels);
        out.operator_matrix = op.matrix;
        embed_from_model(decompose(op));
    } else if (method == "kernel_sum") {
        StochasticOperator op = kernel_sum(kernels);
        out.operator_matrix = op.matrix;
        embed_from_model(decompose(op));
    } else if (method == "generalized_alpha") {
        require(n_views == 2, "generalized_alpha needs exactly two views");
        MultiViewOperator op = generalized_multiview_operator(kernels[0], kernels[1], mo.alpha);
        out.operator_matrix = op.phat;
        embed_from_model(decompose(op));
    } else if (method == "desa") {
        require(n_views == 2, "desa needs exactly two views");
        const DeSaResult desa = desa_operator(kernels[0], kernels[1], mo.components);
        const Index m = views.samples();
        out.per_view = true;
        out.coords.push_back(desa.clustering_map.topRows(m));
        out.coords.push_back(desa.clustering_map.bottomRows(m));
        out.r = static_cast<int>(desa.clustering_map.cols());
    } else if (method == "kcca") {
        require(n_views == 2, "kcca needs exactly two views");
        const KccaResult res = kcca(kernels[0], kernels[1], mo.gamma, mo.components);
        out.per_view = true;
        out.coords.push_back(res.v1);
        out.coords.push_back(res.v2);
        out.r = static_cast<int>(res.v1.cols());
    } else if (method == "alternating") {
        require(n_views == 2, "alternating needs exactly two views");
        StochasticOperator ad = alternating_diffusion(single_view_operator(kernels[0]),
                                                      single_view_operator(kernels[1]));
        out.operator_matrix = ad.matrix;
        out.coords.push_back(cap_columns(alternating_embed(ad, mo.t, mo.delta), mo.r));
        out.r = static_cast<int>(out.coords.front().cols());
    } else {
        throw invalid_input("unknown method '" + method + "'");
    }
    return out;
}

// Sample-level feature matrix for clustering/classification: per-view
// coordinate blocks concatenated columnwise.
Matrix features_of(const MethodOutput& out) {
    if (out.coords.size() == 1) return out.coords.front();
    Index cols = 0;
    for (const Matrix& c : out.coords) cols += c.cols();
    Matrix features(out.coords.front().rows(), cols);
    Index at = 0;
    for (const Matrix& c : out.coords) {
        features.middleCols(at, c.cols()) = c;
        at += c.cols();
    }
    return features;
}

json sigmas_json(const std::vector<double>& sigmas) {
    json arr = json::array();
    for (double s : sigmas) arr.push_back(s);
    return arr;
}

void write_json(const fs::path& path, const json& j) { csv::write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

struct GenOptions {
    std::string dataset;
    std::string out_dir;
    std::uint64_t seed = 0;
    int m = 0;
    double noise = -1.0;
    std::string clusters = "6,6";
    int points_per_cluster = 100;
    int dim = 9;
    double center_var = 8.0;
    double cluster_var = 2.0;
    int n_views = 2;
};

int run_gen(const GenOptions& g) {
    LabeledViewSet data;
    if (g.dataset == "gaussian-clusters") {
        std::vector<int> counts;
        for (double v : parse_double_list(g.clusters, "--clusters"))
            counts.push_back(static_cast<int>(v));
        data = gen_gaussian_clusters(g.seed, counts, g.points_per_cluster, g.dim, g.center_var,
                                     g.cluster_var);
    } else if (g.dataset == "swiss-rolls") {
        data = gen_noisy_swiss_rolls(g.seed, g.m > 0 ? g.m : 1000, g.noise < 0 ? 0.0 : g.noise,
                                     g.n_views);
    } else if (g.dataset == "coupled-circles") {
        data = gen_coupled_circles(g.seed, g.m > 0 ? g.m : 1600, g.noise < 0 ? 0.03 : g.noise);
    } else if (g.dataset == "helix-a") {
        data = gen_helix_a(g.seed, g.m > 0 ? g.m : 1000);
    } else if (g.dataset == "helix-b") {
        data = gen_helix_b(g.seed, g.m > 0 ? g.m : 1000);
    } else {
        throw invalid_input("unknown dataset '" + g.dataset +
                            "' (gaussian-clusters, swiss-rolls, coupled-circles, helix-a, "
                            "helix-b)");
    }

    const fs::path dir(g.out_dir);
    fs::create_directories(dir);
    for (std::size_t l = 0; l < data.views.views.size(); ++l)
        csv::write_matrix(dir / ("view_" + std::to_string(l + 1) + ".csv"),
                          data.views.views[l].data);
    csv::write_labels(dir / "labels.csv", data.labels);
    csv::write_matrix(dir / "latent.csv", data.latent);

    json manifest;
    manifest["dataset"] = g.dataset;
    manifest["seed"] = g.seed;
    manifest["samples"] = data.samples();
    manifest["n_views"] = data.views.count();
    manifest["latent_columns"] = data.latent_names;
    write_json(dir / "manifest.json", manifest);
    std::cerr << "gen: wrote " << data.views.count() << " views of " << data.samples()
              << " samples to " << dir.string() << "\n";
    return 0;
}

int run_bandwidth(const ViewOptions& vo, bool scan, int grid_points, const std::string& out_dir) {
    const ViewSet views = load_views(vo);
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    json report;
    report["c"] = vo.maxmin_c;
    json per_view = json::array();
    for (const auto& v : views.views) {
        const double s2 = max_min_bandwidth(v, vo.maxmin_c);
        json entry;
        entry["view"] = v.view_id;
        entry["maxmin_sigma2"] = s2;
        entry["maxmin_sigma"] = std::sqrt(s2);
        per_view.push_back(entry);
    }

    if (scan) {
        require(views.count() >= 2, "--scan needs at least two views");
        std::vector<std::vector<double>> grids;
        for (const auto& v : views.views) grids.push_back(default_scan_grid(v, grid_points));
        const BandwidthScan result = bandwidth_scan(views, grids);
        for (int l = 0; l < views.count(); ++l) {
            per_view[static_cast<std::size_t>(l)]["scan_sigma"] =
                result.selected_sigma[static_cast<std::size_t>(l)];
            per_view[static_cast<std::size_t>(l)]["grid"] =
                result.grids[static_cast<std::size_t>(l)];
        }
        for (const auto& surf : result.surfaces)
            csv::write_matrix(dir / ("scan_surface_" + std::to_string(surf.view_l) + "_" +
                                     std::to_string(surf.view_m) + ".csv"),
                              surf.log_sum);
    }
    report["views"] = per_view;
    write_json(dir / "bandwidth.json", report);
    std::cerr << "bandwidth: report written to " << (dir / "bandwidth.json").string() << "\n";
    return 0;
}

struct EmbedOptions {
    ViewOptions views;
    MethodOptions method;
    std::string out_dir;
    std::string dump_operator;
    bool save_model = false;
    std::uint64_t seed = 0;
};

int run_embed(const EmbedOptions& eo) {
    const ViewSet views = load_views(eo.views);
    const std::vector<KernelKind> kinds = resolve_kinds(eo.views, views.count());
    const std::vector<double> sigmas = resolve_sigmas(eo.views, views, kinds);
    const std::vector<KernelMatrix> kernels = build_kernels(views, kinds, sigmas);

    const MethodOutput out = compute_method(eo.method.method, views, kernels, eo.method);

    const fs::path dir(eo.out_dir);
    fs::create_directories(dir);
    if (out.per_view || out.coords.size() > 1) {
        for (std::size_t l = 0; l < out.coords.size(); ++l)
            csv::write_indexed_matrix(dir / ("coords_view_" + std::to_string(l + 1) + ".csv"),
                                      out.coords[l]);
    } else {
        csv::write_indexed_matrix(dir / "coords.csv", out.coords.front());
    }

    if (!eo.dump_operator.empty()) {
        require(out.operator_matrix.size() > 0,
                "--dump-operator: method '" + eo.method.method + "' has no stochastic operator");
        csv::write_matrix(eo.dump_operator, out.operator_matrix);
    }

    if (eo.save_model) {
        require(out.has_model, "--save-model: method '" + eo.method.method +
                                   "' does not produce a spectral model");
        SavedModel bundle;
        bundle.model = out.model;
        for (const auto& v : views.views) bundle.train_views.push_back(v);
        bundle.sigmas = sigmas;
        bundle.kinds = kinds;
        bundle.method = eo.method.method;
        bundle.t = eo.method.t;
        bundle.delta = eo.method.delta;
        bundle.seed = eo.seed;
        save_model(dir / "model", bundle);
    }

    json manifest;
    manifest["method"] = eo.method.method;
    manifest["r"] = out.r;
    manifest["t"] = eo.method.t;
    manifest["delta"] = eo.method.delta;
    manifest["sigma"] = sigmas_json(sigmas);
    manifest["seed"] = eo.seed;
    write_json(dir / "embed.json", manifest);
    std::cerr << "embed: method " << eo.method.method << ", r = " << out.r << ", wrote "
              << dir.string() << "\n";
    return 0;
}

int run_spectrum(const ViewOptions& vo, const std::string& out_file) {
    const ViewSet views = load_views(vo);
    const std::vector<KernelKind> kinds = resolve_kinds(vo, views.count());
    const std::vector<double> sigmas = resolve_sigmas(vo, views, kinds);
    const std::vector<KernelMatrix> kernels = build_kernels(views, kinds, sigmas);

    std::vector<std::string> names;
    std::vector<Vector> columns;
    for (int l = 0; l < views.count(); ++l) {
        names.push_back("single_view_" + std::to_string(l + 1));
        columns.push_back(
            decompose(single_view_operator(kernels[static_cast<std::size_t>(l)]))
                .eigenvalues.cwiseAbs());
    }
    names.push_back("kernel_sum");
    columns.push_back(decompose(kernel_sum(kernels)).eigenvalues.cwiseAbs());
    names.push_back("kernel_product");
    columns.push_back(decompose(kernel_product(kernels)).eigenvalues.cwiseAbs());
    if (views.count() >= 2) {
        names.push_back("multiview");
        columns.push_back(decompose(assemble_multiview(kernels)).eigenvalues.cwiseAbs());
    }

    Index max_rows = 0;
    for (const auto& c : columns) max_rows = std::max(max_rows, c.size());
    std::string text;
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c > 0) text += ',';
        text += names[c];
    }
    text += '\n';
    for (Index r = 0; r < max_rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c > 0) text += ',';
            if (r < columns[c].size()) text += csv::format_double(columns[c][r]);
        }
        text += '\n';
    }
    csv::write_text(out_file, text);
    std::cerr << "spectrum: wrote " << out_file << "\n";
    return 0;
}

struct DistanceOptions {
    ViewOptions views;
    int t = 1;
    double delta = 0.05;
    int inner_view = 0; // 0 = skip
    bool multiview_matrix = false;
    bool cross = false;
    bool svdd = false;
    std::string out_dir;
};

int run_distances(const DistanceOptions& d) {
    const ViewSet views = load_views(d.views);
    require(views.count() >= 2, "distances: need at least two views");
    const std::vector<KernelKind> kinds = resolve_kinds(d.views, views.count());
    const std::vector<double> sigmas = resolve_sigmas(d.views, views, kinds);
    const std::vector<KernelMatrix> kernels = build_kernels(views, kinds, sigmas);

    const fs::path dir(d.out_dir);
    fs::create_directories(dir);
    const SpectralModel model = decompose(assemble_multiview(kernels));
    const Index m = model.points_per_view;

    if (d.inner_view > 0) {
        require(d.inner_view <= views.count(), "distances: --inner view out of range");
        Matrix mat(m, m);
        for (Index i = 0; i < m; ++i) {
            mat(i, i) = 0.0;
            for (Index j = i + 1; j < m; ++j) {
                const double v = inner_view_distance(model, d.inner_view, i, j, d.t);
                mat(i, j) = v;
                mat(j, i) = v;
            }
        }
        csv::write_matrix(dir / ("inner_view_" + std::to_string(d.inner_view) + ".csv"), mat);
    }

    if (d.multiview_matrix) {
        const Embedding emb = multiview_embed(model, d.t, d.delta);
        Matrix mat(m, m);
        for (Index i = 0; i < m; ++i) {
            mat(i, i) = 0.0;
            for (Index j = i + 1; j < m; ++j) {
                const double v = multiview_distance(emb, i, j);
                mat(i, j) = v;
                mat(j, i) = v;
            }
        }
        csv::write_matrix(dir / "multiview.csv", mat);
    }

    if (d.cross || d.svdd) {
        json scalars;
        scalars["t"] = d.t;
        if (d.cross) {
            require(views.count() == 2, "cross-view distance is defined for two views");
            scalars["cvdd"] = cross_view_distance(model, d.t);
        }
        if (d.svdd) {
            require(views.count() == 2, "svdd is defined for two views");
            const Embedding ex = single_view_embed(views.views[0], sigmas[0], d.t, d.delta,
                                                   kinds[0]);
            const Embedding ey = single_view_embed(views.views[1], sigmas[1], d.t, d.delta,
                                                   kinds[1]);
            scalars["svdd"] = single_view_cross_distance(ex, ey, true);
            scalars["svdd_raw"] = single_view_cross_distance(ex, ey, false);
        }
        write_json(dir / "cross.json", scalars);
    }
    std::cerr << "distances: wrote " << dir.string() << "\n";
    return 0;
}

int run_extend(const std::string& model_dir, const std::string& points_file, bool header,
               const std::string& view_name, const std::string& out_file) {
    const SavedModel bundle = load_model(model_dir);
    require(bundle.model.n_views == 2, "extend: the saved model must have exactly two views");
    require(bundle.train_views.size() == 2, "extend: the model bundle is missing training views");
    for (KernelKind k : bundle.kinds)
        require(k == KernelKind::gaussian, "extend: only Gaussian-kernel models can be extended");

    ExtensionModel em;
    em.train_x = bundle.train_views[0];
    em.train_y = bundle.train_views[1];
    em.sigma_x = bundle.sigmas.at(0);
    em.sigma_y = bundle.sigmas.at(1);
    em.t = bundle.t;
    em.model = bundle.model;
    em.kernel_x = gaussian_kernel(em.train_x, em.sigma_x).values;
    em.kernel_y = gaussian_kernel(em.train_y, em.sigma_y).values;

    const Matrix points = csv::read_matrix(points_file, header);
    const bool from_x = view_name == "x";
    require(from_x || view_name == "y", "extend: --view must be 'x' or 'y'");

    Matrix coords;
    int low_confidence = 0;
    for (Index i = 0; i < points.rows(); ++i) {
        const ExtendedPoint ep = from_x ? extend_x(em, points.row(i).transpose())
                                        : extend_y(em, points.row(i).transpose());
        if (coords.size() == 0) coords.resize(points.rows(), ep.coords.size());
        require_numeric(ep.coords.size() == coords.cols(),
                        "extend: inconsistent retained coordinate count across points");
        coords.row(i) = ep.coords.transpose();
        if (ep.low_confidence) ++low_confidence;
    }
    csv::write_indexed_matrix(out_file, coords);
    if (low_confidence > 0)
        std::cerr << "extend: warning: " << low_confidence << " of " << points.rows()
                  << " points are far from all training data (max kernel weight < 1e-6)\n";
    std::cerr << "extend: wrote " << coords.rows() << " x " << coords.cols() << " coordinates to "
              << out_file << "\n";
    return 0;
}

struct ClusterOptions {
    ViewOptions views;
    MethodOptions method;
    int k = 2;
    int restarts = 10;
    std::uint64_t seed = 0;
    std::string labels_file;
    std::string out_file;
};

int run_cluster(const ClusterOptions& co) {
    const ViewSet views = load_views(co.views);
    const std::vector<KernelKind> kinds = resolve_kinds(co.views, views.count());
    const std::vector<double> sigmas = resolve_sigmas(co.views, views, kinds);
    const std::vector<KernelMatrix> kernels = build_kernels(views, kinds, sigmas);
    const MethodOutput out = compute_method(co.method.method, views, kernels, co.method);

    std::vector<int> labels;
    double inertia = 0.0;
    if (co.method.method == "desa") {
        // Bipartite map: cluster both blocks, report the view-1 rows.
        Matrix stacked(2 * views.samples(), out.coords.front().cols());
        stacked.topRows(views.samples()) = out.coords[0];
        stacked.bottomRows(views.samples()) = out.coords[1];
        const ClusteringResult cr = kmeans(stacked, co.k, co.seed, co.restarts);
        labels.assign(cr.labels.begin(), cr.labels.begin() + views.samples());
        inertia = cr.inertia;
    } else {
        const ClusteringResult cr = kmeans(features_of(out), co.k, co.seed, co.restarts);
        labels = cr.labels;
        inertia = cr.inertia;
    }

    json metrics;
    metrics["method"] = co.method.method;
    metrics["r"] = out.r;
    metrics["t"] = co.method.t;
    metrics["sigma"] = sigmas_json(sigmas);
    metrics["k"] = co.k;
    metrics["seed"] = co.seed;
    metrics["inertia"] = inertia;
    if (!co.labels_file.empty()) {
        const std::vector<int> truth = csv::read_labels(co.labels_file, co.views.header);
        require(truth.size() == labels.size(),
                "cluster: label count " + std::to_string(truth.size()) +
                    " does not match sample count " + std::to_string(labels.size()));
        metrics["accuracy"] = clustering_accuracy(labels, truth);
        metrics["nmi"] = nmi(labels, truth);
    }
    write_json(co.out_file, metrics);
    std::cerr << "cluster: wrote " << co.out_file << "\n";
    return 0;
}

struct ClassifyOptions {
    ViewOptions views;
    MethodOptions method;
    int knn = 1;
    std::string labels_file;
    std::string out_file;
    std::uint64_t seed = 0;
};

int run_classify(const ClassifyOptions& co) {
    const ViewSet views = load_views(co.views);
    const std::vector<KernelKind> kinds = resolve_kinds(co.views, views.count());
    const std::vector<double> sigmas = resolve_sigmas(co.views, views, kinds);
    const std::vector<KernelMatrix> kernels = build_kernels(views, kinds, sigmas);
    const MethodOutput out = compute_method(co.method.method, views, kernels, co.method);

    const std::vector<int> truth = csv::read_labels(co.labels_file, co.views.header);
    const Matrix features = features_of(out);
    require(static_cast<Index>(truth.size()) == features.rows(),
            "classify: label count does not match sample count");

    json metrics;
    metrics["method"] = co.method.method;
    metrics["r"] = out.r;
    metrics["t"] = co.method.t;
    metrics["sigma"] = sigmas_json(sigmas);
    metrics["knn"] = co.knn;
    metrics["seed"] = co.seed;
    metrics["accuracy"] = knn_loo_classify(features, truth, co.knn);
    write_json(co.out_file, metrics);
    std::cerr << "classify: wrote " << co.out_file << "\n";
    return 0;
}

struct BenchOptions {
    std::string experiment;
    std::string noise_grid = "0.03:0.6:10";
    int trials = 20;
    std::uint64_t seed = 1;
    int m = 0;
    std::string which = "a";
    double maxmin_c = 1.0;
    std::string out_dir;
};

std::vector<double> parse_grid(const std::string& text) {
    // start:end:count, linear spacing.
    std::vector<double> parts = parse_double_list(
        [&] {
            std::string s = text;
            std::replace(s.begin(), s.end(), ':', ',');
            return s;
        }(),
        "--noise-grid");
    require(parts.size() == 3, "--noise-grid format is start:end:count");
    const double lo = parts[0], hi = parts[1];
    const int n = static_cast<int>(parts[2]);
    require(n >= 1 && hi >= lo && lo >= 0.0, "--noise-grid: invalid range");
    std::vector<double> grid;
    for (int i = 0; i < n; ++i)
        grid.push_back(n == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(n - 1));
    return grid;
}

int run_bench(const BenchOptions& bo) {
    const fs::path dir(bo.out_dir);
    fs::create_directories(dir);

    if (bo.experiment == "circles") {
        const std::vector<double> grid = parse_grid(bo.noise_grid);
        const CirclesBenchResult res =
            circles_bench(grid, bo.trials, bo.seed, bo.m > 0 ? bo.m : 1600, bo.maxmin_c);
        json j;
        j["experiment"] = "circles";
        j["seed"] = res.seed;
        j["trials"] = res.trials;
        j["m"] = res.m;
        j["t"] = 1;
        j["noise_grid"] = res.noise_grid;
        j["methods"] = res.methods;
        json acc;
        for (std::size_t i = 0; i < res.methods.size(); ++i)
            acc[res.methods[i]] = res.mean_accuracy[i];
        j["mean_accuracy"] = acc;
        write_json(dir / "bench_circles.json", j);
        std::cerr << "bench: circles sweep written to " << (dir / "bench_circles.json").string()
                  << "\n";
        return 0;
    }
    if (bo.experiment == "helix") {
        require(bo.which == "a" || bo.which == "b", "--which must be 'a' or 'b'");
        const HelixBenchResult res =
            helix_bench(bo.which[0], bo.seed, bo.m > 0 ? bo.m : 1000, bo.maxmin_c);
        csv::write_indexed_matrix(dir / "helix_mv_view_1.csv", res.mv_coords_view1);
        csv::write_indexed_matrix(dir / "helix_mv_view_2.csv", res.mv_coords_view2);
        csv::write_indexed_matrix(dir / "helix_kp.csv", res.kp_coords);
        json j;
        j["experiment"] = "helix";
        j["which"] = bo.which;
        j["seed"] = bo.seed;
        j["m"] = res.mv_coords_view1.rows();
        j["multiview"] = {{"corr_view1_a", res.mv_corr_view1_a},
                          {"corr_view2_b", res.mv_corr_view2_b}};
        j["kernel_product"] = {{"corr_a", res.kp_corr_a}, {"corr_b", res.kp_corr_b}};
        write_json(dir / "bench_helix.json", j);
        std::cerr << "bench: helix report written to " << (dir / "bench_helix.json").string()
                  << "\n";
        return 0;
    }
    throw invalid_input("unknown experiment '" + bo.experiment + "' (circles, helix)");
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"multi-view diffusion maps toolkit"};
    app.require_subcommand(1);

    GenOptions gen_opts;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("--dataset", gen_opts.dataset,
                    "gaussian-clusters|swiss-rolls|coupled-circles|helix-a|helix-b")
        ->required();
    gen->add_option("--out", gen_opts.out_dir, "output directory")->required();
    gen->add_option("--seed", gen_opts.seed, "RNG seed");
    gen->add_option("--m", gen_opts.m, "sample count (dataset default when omitted)");
    gen->add_option("--noise", gen_opts.noise, "noise variance");
    gen->add_option("--clusters", gen_opts.clusters, "clusters per view, e.g. 6,3");
    gen->add_option("--points-per-cluster", gen_opts.points_per_cluster, "points per cluster");
    gen->add_option("--dim", gen_opts.dim, "feature dimension for gaussian-clusters");
    gen->add_option("--center-var", gen_opts.center_var, "center variance");
    gen->add_option("--cluster-var", gen_opts.cluster_var, "within-cluster variance");
    gen->add_option("--n-views", gen_opts.n_views, "view count for swiss-rolls");

    ViewOptions bw_views;
    bool bw_scan = false;
    int bw_grid_points = 25;
    std::string bw_out;
    CLI::App* bandwidth = app.add_subcommand("bandwidth", "max-min and scan bandwidth report");
    add_view_options(bandwidth, bw_views);
    bandwidth->add_flag("--scan", bw_scan, "run the pairwise log-sum bandwidth scan");
    bandwidth->add_option("--grid-points", bw_grid_points, "scan grid resolution");
    bandwidth->add_option("--out", bw_out, "output directory")->required();

    EmbedOptions embed_opts;
    CLI::App* embed = app.add_subcommand("embed", "fit an embedding and write coordinates");
    add_view_options(embed, embed_opts.views);
    add_method_options(embed, embed_opts.method);
    embed->add_option("--out", embed_opts.out_dir, "output directory")->required();
    embed->add_option("--dump-operator", embed_opts.dump_operator,
                      "also write the row-stochastic operator as dense CSV");
    embed->add_flag("--save-model", embed_opts.save_model, "save the model bundle for `extend`");
    embed->add_option("--seed", embed_opts.seed, "seed recorded in the manifest");

    ViewOptions spectrum_views;
    std::string spectrum_out;
    CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalue magnitudes per method");
    add_view_options(spectrum, spectrum_views);
    spectrum->add_option("--out", spectrum_out, "output CSV file")->required();

    DistanceOptions dist_opts;
    CLI::App* distances = app.add_subcommand("distances", "diffusion distance matrices");
    add_view_options(distances, dist_opts.views, 2);
    distances->add_option("--t", dist_opts.t, "diffusion time");
    distances->add_option("--delta", dist_opts.delta, "truncation accuracy");
    distances->add_option("--inner", dist_opts.inner_view, "write inner-view distances for view L");
    distances->add_flag("--multiview", dist_opts.multiview_matrix,
                        "write the truncated multi-view distance matrix");
    distances->add_flag("--cross", dist_opts.cross, "write the cross-view distance (CVDD)");
    distances->add_flag("--svdd", dist_opts.svdd, "write the single-view cross distance (SVDD)");
    distances->add_option("--out", dist_opts.out_dir, "output directory")->required();

    std::string extend_model, extend_points, extend_view = "x", extend_out;
    bool extend_header = false;
    CLI::App* extend = app.add_subcommand("extend", "Nystrom extension of a saved model");
    extend->add_option("--model", extend_model, "model bundle directory")->required();
    extend->add_option("--points", extend_points, "CSV of new points")->required();
    extend->add_option("--view", extend_view, "which view the points belong to: x|y");
    extend->add_flag("--header", extend_header, "skip one header line in the points CSV");
    extend->add_option("--out", extend_out, "output coordinates CSV")->required();

    ClusterOptions cluster_opts;
    CLI::App* cluster = app.add_subcommand("cluster", "k-means over the embedding");
    add_view_options(cluster, cluster_opts.views);
    add_method_options(cluster, cluster_opts.method);
    cluster->add_option("--k", cluster_opts.k, "cluster count")->required();
    cluster->add_option("--restarts", cluster_opts.restarts, "k-means restarts");
    cluster->add_option("--seed", cluster_opts.seed, "k-means seed");
    cluster->add_option("--labels", cluster_opts.labels_file, "ground-truth labels CSV");
    cluster->add_option("--out", cluster_opts.out_file, "metrics JSON file")->required();

    ClassifyOptions classify_opts;
    CLI::App* classify = app.add_subcommand("classify", "leave-one-out k-NN in the embedding");
    add_view_options(classify, classify_opts.views);
    add_method_options(classify, classify_opts.method);
    classify->add_option("--knn", classify_opts.knn, "neighbor count");
    classify->add_option("--labels", classify_opts.labels_file, "ground-truth labels CSV")
        ->required();
    classify->add_option("--seed", classify_opts.seed, "seed recorded in the metrics");
    classify->add_option("--out", classify_opts.out_file, "metrics JSON file")->required();

    BenchOptions bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "canned experiment sweeps");
    bench->add_option("--experiment", bench_opts.experiment, "circles|helix")->required();
    bench->add_option("--noise-grid", bench_opts.noise_grid, "start:end:count noise variances");
    bench->add_option("--trials", bench_opts.trials, "trials per grid point");
    bench->add_option("--seed", bench_opts.seed, "base seed");
    bench->add_option("--m", bench_opts.m, "sample count (experiment default when omitted)");
    bench->add_option("--which", bench_opts.which, "helix variant: a|b");
    bench->add_option("--c", bench_opts.maxmin_c, "max-min bandwidth constant");
    bench->add_option("--out", bench_opts.out_dir, "output directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*gen) return run_gen(gen_opts);
        if (*bandwidth) return run_bandwidth(bw_views, bw_scan, bw_grid_points, bw_out);
        if (*embed) return run_embed(embed_opts);
        if (*spectrum) return run_spectrum(spectrum_views, spectrum_out);
        if (*distances) return run_distances(dist_opts);
        if (*extend)
            return run_extend(extend_model, extend_points, extend_header, extend_view, extend_out);
        if (*cluster) return run_cluster(cluster_opts);
        if (*classify) return run_classify(classify_opts);
        if (*bench) return run_bench(bench_opts);
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace mvdm::cli
