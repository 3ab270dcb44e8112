// Python bindings for the core operations: bounds, layout planning, key
// digests, and full adversarial sessions.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "znec/harness.hpp"

namespace py = pybind11;
using namespace znec;

namespace {

const char* row_case_name(RowCase kind) {
    switch (kind) {
        case RowCase::NoSyndrome: return "no-syndrome";
        case RowCase::PartialSyndrome: return "partial-syndrome";
        case RowCase::FullSyndrome: return "full-syndrome";
        case RowCase::SingleSyndrome: return "single-syndrome";
    }
    return "?";
}

NetworkParams make_params(int n, int m, int a, int b, int c, int z, std::uint32_t q) {
    NetworkParams p;
    p.n = n;
    p.m = m;
    p.a = a;
    p.b = b;
    p.c = c;
    p.z = z;
    p.q = q;
    p.validate();
    return p;
}

}  // namespace

PYBIND11_MODULE(_znec, mod) {
    mod.doc() = "adversarial-link network coding: bounds, layouts, and session simulation";

    py::class_<NetworkParams>(mod, "NetworkParams")
        .def(py::init(&make_params), py::arg("n"), py::arg("m"), py::arg("a"), py::arg("b"),
             py::arg("c"), py::arg("z"), py::arg("q") = 257)
        .def_readonly("n", &NetworkParams::n)
        .def_readonly("m", &NetworkParams::m)
        .def_readonly("a", &NetworkParams::a)
        .def_readonly("b", &NetworkParams::b)
        .def_readonly("c", &NetworkParams::c)
        .def_readonly("z", &NetworkParams::z)
        .def_readonly("q", &NetworkParams::q)
        .def("__repr__", [](const NetworkParams& p) {
            std::ostringstream os;
            os << "NetworkParams(n=" << p.n << ", m=" << p.m << ", a=" << p.a << ", b=" << p.b
               << ", c=" << p.c << ", z=" << p.z << ", q=" << p.q << ")";
            return os.str();
        });

    mod.def("upper_bound", &upper_bound, py::arg("p"),
            "message symbols per codeword the scheme targets");
    mod.def("classify", &classify, py::arg("p"), "parameter regime 1..4");
    mod.def("tight", &tight_condition, py::arg("p"),
            "whether the feedback capacity is small enough for the bound to be achieved");
    mod.def("identified_margin", &identified_margin, py::arg("p"), py::arg("x"),
            "slack of the residual cut bound after x upstream identifications");

    mod.def(
        "bound_report",
        [](const NetworkParams& p) {
            BoundReport r = bound_report(p);
            py::dict out;
            out["upper_bound"] = r.ub;
            out["category"] = r.category;
            out["tight"] = r.tight;
            out["margin_at_2"] = r.margin_at_2;
            py::dict sb;
            for (const auto& [name, value] : r.sb) sb[py::str(name)] = value;
            out["singleton"] = sb;
            return out;
        },
        py::arg("p"), "all rate bounds for one tuple as a dict");

    mod.def(
        "plan_layout",
        [](const NetworkParams& p) {
            py::list rows;
            for (const RowPlan& plan : plan_layout(p)) {
                py::dict row;
                row["kind"] = row_case_name(plan.kind);
                row["k1"] = plan.k1;
                row["k2p"] = plan.k2p;
                row["k3"] = plan.k3;
                rows.append(row);
            }
            return rows;
        },
        py::arg("p"), "per-row feedback budget split (tight regime only)");

    mod.def(
        "keys_digest",
        [](const NetworkParams& p, std::uint64_t seed) {
            KeyOptions opt;
            opt.seed = seed;
            std::vector<std::uint8_t> blob = serialize_keys(make_keys(p, opt));
            std::ostringstream os;
            os << std::hex;
            os.width(16);
            os.fill('0');
            os << fnv1a64(blob.data(), blob.size());
            return os.str();
        },
        py::arg("p"), py::arg("seed") = kDefaultKeySeed,
        "FNV-1a digest of the serialized shared keys");

    mod.def(
        "run_session",
        [](const NetworkParams& p, const std::string& strategy, std::uint64_t seed, int rounds) {
            SessionConfig cfg;
            cfg.p = p;
            cfg.rounds = rounds;
            cfg.strategy = StrategySpec::parse(strategy);
            cfg.strategy.seed = seed;
            cfg.seed = seed;
            SessionResult res = run_session(cfg);
            py::dict out;
            out["verdict"] = std::string(verdict_name(res.verdict));
            out["alarms"] = res.alarms;
            out["claims"] = res.claims;
            out["identified"] = res.identified;
            out["feedback_identified"] = res.feedback_identified;
            py::list rows;
            for (const RoundTranscript& tr : res.rounds) {
                py::dict row;
                row["round"] = tr.round;
                row["adversary_active"] = tr.adversary_active;
                row["alarm"] = tr.alarm;
                row["claim"] = tr.claim;
                row["mode"] = std::string(mode_name(tr.mode));
                row["decode_ok"] = tr.decode_ok;
                row["decode_correct"] = tr.decode_correct;
                row["feedback_symbols"] = tr.feedback_symbols;
                row["newly_identified"] = tr.newly_identified;
                rows.append(row);
            }
            out["rounds"] = rows;
            return out;
        },
        py::arg("p"), py::arg("strategy") = "none", py::arg("seed") = 1, py::arg("rounds") = 3,
        "simulate one multi-round session against the named strategy");
}
