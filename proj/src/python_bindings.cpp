#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wiretap/acceptance.hpp"
#include "wiretap/report.hpp"
#include "wiretap/units.hpp"

namespace py = pybind11;
using namespace wiretap;

namespace {

ChannelSet channel_set(const CMatrix& h_ba, const CMatrix& h_ea, double sigma_b_sq, double sigma_e_sq,
                       double power_p) {
    return make_channel_set(ChannelMatrix(h_ba), ChannelMatrix(h_ea), {sigma_b_sq, sigma_e_sq, power_p});
}

py::dict svd_dict(const SvdPartition& s) {
    py::dict d;
    d["u"] = s.u;
    d["sigma"] = s.sigma;
    d["v"] = s.v;
    d["ill_conditioned"] = s.ill_conditioned;
    return d;
}

py::dict report_dict(const SinrReport& r) {
    py::dict d;
    d["sinr_b"] = r.sinr_b;
    d["sinr_e"] = r.sinr_e;
    d["secrecy_capacity"] = r.secrecy_capacity;
    d["outage"] = r.outage;
    return d;
}

// Results travel as the same JSON document the CLI writes.
py::object to_python(const Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

Json from_python(const py::object& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

ExperimentConfig config_from(const py::object& o) {
    if (py::isinstance<py::str>(o))
        return parse_config_text(o.cast<std::string>());
    if (o.is_none())
        return {};
    return config_from_json(from_python(o));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MIMO wiretap simulator with artificial noise under imperfect CSI";

    // Translators are tried newest first, so the base class goes first.
    py::register_exception<Error>(m, "WiretapError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ValidityRangeError>(m, "ValidityRangeError", PyExc_ArithmeticError);

    m.def("to_db", &to_db);
    m.def("from_db", &from_db);
    m.def("library_version", &library_version);

    m.def(
        "generate_channels",
        [](int na, int nb, int ne, double gamma_ea_sq, std::uint64_t seed) {
            const ChannelSet c = generate_channels(na, nb, ne, gamma_ea_sq, seed);
            return py::make_tuple(py::cast(CMatrix(c.h_ba.matrix())), py::cast(CMatrix(c.h_ea.matrix())));
        },
        py::arg("na"), py::arg("nb"), py::arg("ne"), py::arg("gamma_ea_sq") = 1.0, py::arg("seed") = 0,
        "Returns (H_ba, H_ea) with CN(0,1) and CN(0, gamma_ea_sq) entries.");

    m.def(
        "partition_svd", [](const CMatrix& h) { return svd_dict(partition_svd(ChannelMatrix(h))); },
        py::arg("h"));

    m.def(
        "design_artificial_noise",
        [](const CMatrix& h_ba, double target_sinr, double power_p, double sigma_b_sq) {
            const ChannelSet c = channel_set(h_ba, CMatrix::Zero(1, h_ba.cols()), sigma_b_sq, 1.0, power_p);
            const TxScheme s = design_artificial_noise(c, partition_svd(c.h_ba), target_sinr);
            py::dict d;
            d["t"] = s.t;
            d["q_z"] = s.q_z;
            d["rho"] = s.rho;
            d["outage"] = s.outage;
            return d;
        },
        py::arg("h_ba"), py::arg("target_sinr"), py::arg("power_p") = 100.0, py::arg("sigma_b_sq") = 1.0);

    m.def(
        "evaluate_perfect_csi",
        [](const CMatrix& h_ba, const CMatrix& h_ea, double target_sinr, double power_p, double sigma_b_sq,
           double sigma_e_sq) {
            const ChannelSet c = channel_set(h_ba, h_ea, sigma_b_sq, sigma_e_sq, power_p);
            return report_dict(evaluate_perfect_csi(c, partition_svd(c.h_ba), target_sinr));
        },
        py::arg("h_ba"), py::arg("h_ea"), py::arg("target_sinr"), py::arg("power_p") = 100.0,
        py::arg("sigma_b_sq") = 1.0, py::arg("sigma_e_sq") = 1.0);

    m.def(
        "compute_moments",
        [](const CMatrix& h, double sigma_h_sq) {
            const PerturbMoments mo = compute_moments(partition_svd(ChannelMatrix(h)), CsiErrorModel::iid(sigma_h_sq));
            py::dict d;
            d["d"] = mo.d;
            d["g"] = mo.g;
            d["g_prime"] = mo.g_prime;
            d["g_dprime"] = mo.g_dprime;
            d["k"] = mo.k;
            d["e_dv_s"] = mo.e_dv_s;
            d["e_vs_dvs"] = mo.e_vs_dvs;
            d["e_dsigma_s"] = mo.e_dsigma_s;
            d["e_dsigma1"] = mo.e_dsigma1;
            d["e_dsigma1_sq"] = mo.e_dsigma1_sq;
            d["e_dv1"] = mo.e_dv1;
            d["e_v1_dv1"] = mo.e_v1_dv1;
            return d;
        },
        py::arg("h"), py::arg("sigma_h_sq"), "Second-order SVD perturbation moments for i.i.d. errors.");

    m.def(
        "predict_naive_sinr",
        [](const CMatrix& h_ba, double sigma_h_sq, double target_sinr, double power_p, double sigma_b_sq) {
            const ChannelSet c = channel_set(h_ba, CMatrix::Zero(1, h_ba.cols()), sigma_b_sq, 1.0, power_p);
            const SvdPartition svd = partition_svd(c.h_ba);
            return predict_naive_sinr(svd, compute_moments(svd, CsiErrorModel::iid(sigma_h_sq)), c, target_sinr);
        },
        py::arg("h_ba"), py::arg("sigma_h_sq"), py::arg("target_sinr"), py::arg("power_p") = 100.0,
        py::arg("sigma_b_sq") = 1.0);

    m.def("secrecy_capacity_proxy", &secrecy_capacity_proxy, py::arg("sinr_b"), py::arg("sinr_e"));

    m.def(
        "preset", [](const std::string& name) {
            const auto s = parse_scenario(name);
            if (!s)
                throw ConfigError("unknown scenario '" + name + "'");
            return to_python(config_to_json(ExperimentConfig::preset(*s)));
        },
        py::arg("scenario"));

    m.def(
        "run",
        [](const py::object& config, const py::dict& overrides) {
            ExperimentConfig cfg = config_from(config);
            for (const auto& [k, v] : overrides)
                apply_setting(cfg, py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
            SweepResult res;
            {
                py::gil_scoped_release release;
                res = run_scenario(cfg);
            }
            Json out = Json::parse(results_text(res, OutputFormat::json));
            out["config"] = config_to_json(res.config);
            out["axis"] = res.axis;
            return to_python(out);
        },
        py::arg("config") = py::none(), py::arg("overrides") = py::dict(),
        "Runs an experiment. `config` is a dict, a key=value string or None; overrides use the same keys.");

    m.def(
        "validate",
        [](bool quick, std::uint64_t seed) {
            acceptance::Options o;
            o.seed = seed;
            if (quick)
                o = acceptance::Options::quick(o);
            std::vector<acceptance::CheckResult> results;
            {
                py::gil_scoped_release release;
                results = acceptance::run_all(o);
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("quick") = true, py::arg("seed") = acceptance::Options{}.seed);
}
