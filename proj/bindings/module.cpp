#include "mvdm/embedding.hpp"
#include "mvdm/evaluation.hpp"
#include "mvdm/extension.hpp"
#include "mvdm/kernels.hpp"
#include "mvdm/operators.hpp"
#include "mvdm/spectral.hpp"
#include "mvdm/synthetic.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mvdm;

namespace {

ViewMatrix as_view(const Matrix& data, int view_id) { return ViewMatrix{data, view_id}; }

std::vector<KernelMatrix> kernels_from_matrices(const std::vector<Matrix>& mats) {
    std::vector<KernelMatrix> kernels;
    kernels.reserve(mats.size());
    for (const Matrix& m : mats) kernels.push_back(custom_kernel(m));
    return kernels;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multi-view diffusion maps core";

    py::register_exception<invalid_input>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<numeric_error>(m, "NumericError", PyExc_RuntimeError);

    py::class_<KernelMatrix>(m, "KernelMatrix")
        .def_readonly("values", &KernelMatrix::values)
        .def_readonly("sigma", &KernelMatrix::sigma)
        .def_property_readonly("kind",
                               [](const KernelMatrix& k) { return std::string(to_string(k.kind)); });

    py::class_<MultiViewOperator>(m, "MultiViewOperator")
        .def_readonly("khat", &MultiViewOperator::khat)
        .def_readonly("degrees", &MultiViewOperator::degrees)
        .def_readonly("phat", &MultiViewOperator::phat)
        .def_readonly("n_views", &MultiViewOperator::n_views)
        .def_readonly("points_per_view", &MultiViewOperator::points_per_view);

    py::class_<StochasticOperator>(m, "StochasticOperator")
        .def_readonly("matrix", &StochasticOperator::matrix)
        .def_readonly("kernel", &StochasticOperator::kernel)
        .def_readonly("degrees", &StochasticOperator::degrees)
        .def_property_readonly("provenance", [](const StochasticOperator& op) {
            return std::string(to_string(op.provenance));
        });

    py::class_<SpectralModel>(m, "SpectralModel")
        .def_readonly("eigenvalues", &SpectralModel::eigenvalues)
        .def_readonly("psi", &SpectralModel::psi)
        .def_readonly("phi", &SpectralModel::phi)
        .def_readonly("degrees", &SpectralModel::degrees)
        .def_readonly("n_views", &SpectralModel::n_views)
        .def_readonly("points_per_view", &SpectralModel::points_per_view)
        .def_readonly("truncated", &SpectralModel::truncated)
        .def_property_readonly("trivial_flags", [](const SpectralModel& s) {
            std::vector<bool> flags(s.trivial_flags.begin(), s.trivial_flags.end());
            return flags;
        });

    py::class_<Embedding>(m, "Embedding")
        .def_readonly("per_view_coords", &Embedding::per_view_coords)
        .def_readonly("t", &Embedding::t)
        .def_readonly("delta", &Embedding::delta)
        .def_readonly("r", &Embedding::r)
        .def_readonly("model", &Embedding::model);

    py::class_<LabeledViewSet>(m, "LabeledViewSet")
        .def_property_readonly("views",
                               [](const LabeledViewSet& d) {
                                   std::vector<Matrix> out;
                                   for (const auto& v : d.views.views) out.push_back(v.data);
                                   return out;
                               })
        .def_readonly("labels", &LabeledViewSet::labels)
        .def_readonly("latent", &LabeledViewSet::latent)
        .def_readonly("latent_names", &LabeledViewSet::latent_names);

    py::class_<ClusteringResult>(m, "ClusteringResult")
        .def_readonly("labels", &ClusteringResult::labels)
        .def_readonly("inertia", &ClusteringResult::inertia);

    // Kernels.
    m.def(
        "gaussian_kernel",
        [](const Matrix& data, double sigma) { return gaussian_kernel(as_view(data, 1), sigma); },
        py::arg("data"), py::arg("sigma"));
    m.def(
        "laplacian_kernel",
        [](const Matrix& data, double sigma) { return laplacian_kernel(as_view(data, 1), sigma); },
        py::arg("data"), py::arg("sigma"));
    m.def(
        "correlation_kernel",
        [](const Matrix& data, double sigma) {
            return correlation_kernel(as_view(data, 1), sigma);
        },
        py::arg("data"), py::arg("sigma"));
    m.def(
        "max_min_bandwidth",
        [](const Matrix& data, double c) { return max_min_bandwidth(as_view(data, 1), c); },
        py::arg("data"), py::arg("c") = 1.0);
    m.def("custom_kernel", &custom_kernel, py::arg("values"));

    // Operators.
    m.def("assemble_multiview", &assemble_multiview, py::arg("kernels"));
    m.def(
        "assemble_multiview_from_matrices",
        [](const std::vector<Matrix>& mats) {
            return assemble_multiview(kernels_from_matrices(mats));
        },
        py::arg("kernel_matrices"));
    m.def("kernel_product", &kernel_product, py::arg("kernels"));
    m.def("kernel_sum", &kernel_sum, py::arg("kernels"));
    m.def("single_view_operator", &single_view_operator, py::arg("kernel"));
    m.def("generalized_multiview", &generalized_multiview, py::arg("k1"), py::arg("k2"),
          py::arg("alpha"));
    m.def("alternating_diffusion", &alternating_diffusion, py::arg("p1"), py::arg("p2"));
    m.def("transition_probability", &transition_probability, py::arg("op"), py::arg("t"),
          py::arg("view_from"), py::arg("i"), py::arg("view_to"), py::arg("j"));
    m.def(
        "kcca",
        [](const KernelMatrix& k1, const KernelMatrix& k2, double gamma, int n_components) {
            const KccaResult r = kcca(k1, k2, gamma, n_components);
            return py::make_tuple(r.correlations, r.v1, r.v2);
        },
        py::arg("k1"), py::arg("k2"), py::arg("gamma") = 0.01, py::arg("n_components") = 2);
    m.def(
        "desa_operator",
        [](const KernelMatrix& k1, const KernelMatrix& k2, int n_clusters) {
            const DeSaResult r = desa_operator(k1, k2, n_clusters);
            return py::make_tuple(r.a_bar, r.eigenvalues, r.clustering_map);
        },
        py::arg("k1"), py::arg("k2"), py::arg("n_clusters") = 2);

    // Spectral.
    m.def("decompose", py::overload_cast<const MultiViewOperator&>(&decompose), py::arg("op"));
    m.def("decompose_operator", py::overload_cast<const StochasticOperator&>(&decompose),
          py::arg("op"));
    m.def("decompose_svd_route", &decompose_svd_route, py::arg("k1"), py::arg("k2"));
    m.def("coupled_mapping_objective", &coupled_mapping_objective, py::arg("rho"), py::arg("k1"),
          py::arg("k2"));

    // Embedding and distances.
    m.def("multiview_embed", &multiview_embed, py::arg("model"), py::arg("t") = 1,
          py::arg("delta") = 0.05);
    m.def(
        "single_view_embed",
        [](const Matrix& data, double sigma, int t, double delta) {
            return single_view_embed(as_view(data, 1), sigma, t, delta);
        },
        py::arg("data"), py::arg("sigma"), py::arg("t") = 1, py::arg("delta") = 0.05);
    m.def("inner_view_distance", &inner_view_distance, py::arg("model"), py::arg("view"),
          py::arg("i"), py::arg("j"), py::arg("t") = 1);
    m.def("multiview_distance", &multiview_distance, py::arg("embedding"), py::arg("i"),
          py::arg("j"));
    m.def("cross_view_distance", &cross_view_distance, py::arg("model"), py::arg("t") = 1);
    m.def("single_view_cross_distance", &single_view_cross_distance, py::arg("a"), py::arg("b"),
          py::arg("align_signs") = true);

    // Nystrom extension.
    m.def(
        "build_extension_model",
        [](const Matrix& x, const Matrix& y, double sx, double sy, int t) {
            return build_extension_model(as_view(x, 1), as_view(y, 2), sx, sy, t);
        },
        py::arg("x"), py::arg("y"), py::arg("sigma_x"), py::arg("sigma_y"), py::arg("t") = 1);
    py::class_<ExtensionModel>(m, "ExtensionModel")
        .def_readonly("sigma_x", &ExtensionModel::sigma_x)
        .def_readonly("sigma_y", &ExtensionModel::sigma_y)
        .def_readonly("model", &ExtensionModel::model);
    py::class_<ExtendedPoint>(m, "ExtendedPoint")
        .def_readonly("coords", &ExtendedPoint::coords)
        .def_readonly("low_confidence", &ExtendedPoint::low_confidence)
        .def_readonly("max_kernel_weight", &ExtendedPoint::max_kernel_weight);
    m.def("extend_x", &extend_x, py::arg("model"), py::arg("x_new"));
    m.def("extend_y", &extend_y, py::arg("model"), py::arg("y_new"));

    // Synthetic data.
    m.def("gen_gaussian_clusters", &gen_gaussian_clusters, py::arg("seed"),
          py::arg("n_clusters_per_view") = std::vector<int>{6, 6},
          py::arg("points_per_cluster") = 100, py::arg("dim") = 9, py::arg("center_var") = 8.0,
          py::arg("cluster_var") = 2.0);
    m.def("gen_noisy_swiss_rolls", &gen_noisy_swiss_rolls, py::arg("seed"), py::arg("m") = 1000,
          py::arg("noise_var") = 0.0, py::arg("n_views") = 2);
    m.def("gen_coupled_circles", &gen_coupled_circles, py::arg("seed"), py::arg("m") = 1600,
          py::arg("noise_var") = 0.03);
    m.def("gen_helix_a", &gen_helix_a, py::arg("seed"), py::arg("m") = 1000);
    m.def("gen_helix_b", &gen_helix_b, py::arg("seed"), py::arg("m") = 1000);

    // Evaluation.
    m.def("kmeans", &kmeans, py::arg("points"), py::arg("k"), py::arg("seed") = 0,
          py::arg("restarts") = 10, py::arg("max_iters") = 300);
    m.def("nmi", &nmi, py::arg("a"), py::arg("b"));
    m.def("clustering_accuracy", &clustering_accuracy, py::arg("predicted"), py::arg("truth"));
    m.def("knn_loo_classify", &knn_loo_classify, py::arg("embedding"), py::arg("labels"),
          py::arg("k") = 1);
    m.def("circular_rank_correlation", &circular_rank_correlation, py::arg("a"), py::arg("b"));
}
