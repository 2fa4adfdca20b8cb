#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "niceldc/errors.hpp"
#include "niceldc/ldc.hpp"
#include "niceldc/nicesets.hpp"
#include "niceldc/number_theory.hpp"
#include "niceldc/pipeline.hpp"
#include "niceldc/rootsum.hpp"

namespace py = pybind11;
using namespace niceldc;

namespace {

py::int_ big(const std::string& decimal) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(decimal.c_str(), nullptr, 10))); }
py::int_ big(const BigInt& v) { return big(v.str()); }
py::int_ big(u128 v) { return big(to_string_u128(v)); }

py::dict record_dict(const SearchRecord& r) {
    py::dict d;
    d["p"] = r.p;
    d["t"] = r.t;
    d["nec3"] = r.nec3;
    d["odd_t"] = r.odd_t;
    d["weil"] = r.weil;
    d["dep"] = r.dep;
    d["method"] = r.method;
    d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
    d["ms"] = r.ms;
    return d;
}

py::dict summary_dict(const SearchSummary& s) {
    py::dict d;
    d["lo"] = s.lo;
    d["hi"] = s.hi;
    d["method"] = s.method;
    d["seed"] = s.seed;
    for (const auto& [k, v] : s.counters()) d[py::str(k)] = v;
    return d;
}

py::dict simulation_dict(const SimulationReport& r) {
    py::dict d;
    d["delta"] = r.delta;
    d["trials"] = r.trials;
    d["errors"] = r.errors;
    d["rate"] = r.rate;
    d["bound"] = r.bound;
    d["slack"] = r.slack;
    d["violated"] = r.violated;
    d["vacuous"] = r.vacuous;
    return d;
}

py::dict smoothness_dict(const SmoothnessStats& s) {
    py::dict d;
    d["index"] = s.index;
    d["t_size"] = s.t_size;
    d["valid_w"] = s.valid_w;
    d["per_position"] = s.per_position;
    d["outside_hits"] = s.outside_hits;
    d["flat"] = s.flat;
    return d;
}

Message to_message(const std::vector<int>& bits) {
    Message x(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j] != 0 && bits[j] != 1) throw UsageError("message bits must be 0 or 1");
        x[j] = static_cast<std::uint8_t>(bits[j]);
    }
    return x;
}

BitArray to_bits(const std::vector<int>& word) {
    BitArray y(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) y.set(i, word[i] != 0);
    return y;
}

std::vector<int> from_bits(const BitArray& y) {
    std::vector<int> out(y.size());
    for (std::uint64_t i = 0; i < y.size(); ++i) out[i] = y.get(i);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Roots of unity summing to zero in binary fields, nice sets and the resulting codes";

    auto usage = py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_LookupError);
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);
    py::register_exception<SearchExhaustedError>(m, "SearchExhaustedError", PyExc_RuntimeError);
    (void)usage;

    m.def("is_prime", &is_prime, py::arg("n"));
    m.def("ord2", &ord2, py::arg("p"));
    m.def("primes", &sieve_primes, py::arg("lo"), py::arg("hi"));
    m.def("largest_prime_factor_mersenne", [](unsigned t) { return big(largest_prime_factor(mersenne(t))); }, py::arg("t"));

    m.def("necessary_cond_3", &necessary_cond_3, py::arg("p"), py::arg("t"));
    m.def("necessary_cond_k", &necessary_cond_k, py::arg("p"), py::arg("t"), py::arg("k"));
    m.def("sufficient_cond_3", &sufficient_cond_3, py::arg("p"), py::arg("t"));
    m.def("odd_t_filter", &odd_t_filter, py::arg("p"), py::arg("t"));

    m.def("gcd_test_3", &gcd_test_3, py::arg("p"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "class_test_3",
        [](std::uint64_t p, std::uint64_t seed) {
            py::gil_scoped_release release;
            return class_test_3(p, seed).exponent;
        },
        py::arg("p"), py::arg("seed") = 0, "Least class representative i with g^i + 1 in C_p, or None.");

    py::class_<DependencyWitness>(m, "Witness")
        .def_readonly("p", &DependencyWitness::p)
        .def_readonly("t", &DependencyWitness::t)
        .def_readonly("exponents", &DependencyWitness::exponents)
        .def_property_readonly("modulus", [](const DependencyWitness& w) { return w.modulus.to_hex(); })
        .def_property_readonly("generator", [](const DependencyWitness& w) { return w.generator.to_hex(); })
        .def("verify", &verify_witness)
        .def("to_text", &DependencyWitness::to_text)
        .def_static("from_text", [](const std::string& s) { return DependencyWitness::from_text(s); })
        .def("__repr__", [](const DependencyWitness& w) { return "Witness(" + w.to_text() + ")"; });
    m.def("extract_witness_3", &extract_witness_3, py::arg("p"), py::arg("seed") = 0,
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "brute_force_deps",
        [](std::uint64_t p, unsigned k, std::uint64_t seed) {
            const auto r = brute_force_deps(p, k, {}, seed);
            py::dict d;
            d["p"] = r.p;
            d["t"] = r.t;
            d["k"] = r.k;
            d["ordered_count"] = big(r.ordered_count);
            d["distinct_count"] = r.distinct_count ? py::cast(*r.distinct_count) : py::none();
            d["distinct_sets"] = r.distinct_sets;
            d["listing_truncated"] = r.listing_truncated;
            return d;
        },
        py::arg("p"), py::arg("k") = 3, py::arg("seed") = 0);

    m.def(
        "fourier_profile",
        [](std::uint64_t p, unsigned k_max) {
            const auto prof = fourier_profile(p, k_max);
            py::dict d;
            d["p"] = prof.p;
            d["t"] = prof.t;
            d["coefficients"] = prof.coefficients;
            d["max_nontrivial"] = prof.max_nontrivial;
            d["parseval_sum"] = big(prof.parseval_sum);
            py::dict moments;
            for (const auto& [k, v] : prof.m_counts) moments[py::int_(k)] = big(v);
            d["moments"] = moments;
            return d;
        },
        py::arg("p"), py::arg("k_max") = 5);
    m.def("min_k_dependency", [](std::uint64_t p) { return min_k_dependency(p); }, py::arg("p"));

    py::class_<AlgebraicNicePair>(m, "NicePair")
        .def_readonly("p", &AlgebraicNicePair::p)
        .def_readonly("s0", &AlgebraicNicePair::s0)
        .def_readonly("s1", &AlgebraicNicePair::s1)
        .def_property_readonly("tau", [](const AlgebraicNicePair& n) { return n.tau.to_hex(); })
        .def("__repr__", [](const AlgebraicNicePair& n) {
            return "NicePair(p=" + std::to_string(n.p) + ", |S1|=" + std::to_string(n.s1.size()) +
                   ", |S0|=" + std::to_string(n.s0.size()) + ")";
        });
    m.def("build_nice_pair", [](std::uint64_t p, std::uint64_t seed) { return build_nice_pair(p, seed); },
          py::arg("p"), py::arg("seed") = 0);
    m.def(
        "verify_nice",
        [](std::uint64_t p, const ResidueSet& s0, const ResidueSet& s1) {
            return static_cast<bool>(verify_algebraic_niceness(p, s0, s1));
        },
        py::arg("p"), py::arg("s0"), py::arg("s1"));
    m.def("subgroup_2", &subgroup_2, py::arg("p"));

    py::class_<LdcParams>(m, "Code")
        .def(py::init([](std::uint64_t p, std::size_t m, std::uint64_t seed) {
                 return LdcParams::make(trivial_family(p, m), build_nice_pair(p, seed));
             }),
             py::arg("p"), py::arg("m"), py::arg("seed") = 0)
        .def_readonly("p", &LdcParams::p)
        .def_readonly("m", &LdcParams::m)
        .def_readonly("length", &LdcParams::length)
        .def_property_readonly("n", &LdcParams::n)
        .def_property_readonly("queries", &LdcParams::k)
        .def_property_readonly("s0", [](const LdcParams& c) { return c.nice.s0; })
        .def_property_readonly("s1", [](const LdcParams& c) { return c.nice.s1; })
        .def("encode", [](const LdcParams& c, const std::vector<int>& x) { return from_bits(encode(c, to_message(x))); },
             py::arg("message"))
        .def(
            "decode",
            [](const LdcParams& c, const std::vector<int>& y, std::size_t i, std::uint64_t seed) {
                if (y.size() != c.length) throw UsageError("codeword length mismatch");
                if (i >= c.n()) throw UsageError("message index out of range");
                const auto tr = decode_bit(c, to_bits(y), i, seed);
                return py::make_tuple(static_cast<int>(tr.bit), tr.positions);
            },
            py::arg("codeword"), py::arg("i"), py::arg("seed") = 0, "Returns (bit, queried positions).")
        .def(
            "simulate",
            [](const LdcParams& c, double delta, std::uint64_t trials, std::uint64_t seed) {
                SimulationReport r;
                {
                    py::gil_scoped_release release;
                    r = simulate(c, delta, trials, seed);
                }
                return simulation_dict(r);
            },
            py::arg("delta"), py::arg("trials"), py::arg("seed") = 0)
        .def("smoothness", [](const LdcParams& c, std::size_t i) { return smoothness_dict(smoothness_stats(c, i)); },
             py::arg("i"));

    m.def(
        "search",
        [](std::uint64_t lo, std::uint64_t hi, const std::string& method, unsigned threads, std::uint64_t seed,
           const std::string& checkpoint, bool witnesses) {
            RunConfig cfg;
            cfg.lo = lo;
            cfg.hi = hi;
            cfg.method = parse_method(method);
            cfg.threads = threads;
            cfg.seed = seed;
            cfg.checkpoint_path = checkpoint;
            cfg.witnesses = witnesses;
            SearchResult res;
            {
                py::gil_scoped_release release;
                res = run_search(cfg);
            }
            py::list records;
            for (const auto& r : res.records) records.append(record_dict(r));
            return py::make_tuple(records, summary_dict(res.summary));
        },
        py::arg("lo"), py::arg("hi"), py::arg("method") = "class", py::arg("threads") = 0, py::arg("seed") = 0,
        py::arg("checkpoint") = "", py::arg("witnesses") = true,
        "Returns (records, summary). Records cover primes that pass both filters.");

    m.def(
        "eval_bounds",
        [](unsigned t_lo, unsigned t_hi, unsigned k, const std::string& gamma) {
            py::list out;
            for (const auto& r : eval_bounds(t_lo, t_hi, k, Fraction::parse(gamma))) {
                py::dict d;
                d["t"] = r.t;
                d["largest"] = r.largest ? py::object(big(*r.largest)) : py::none();
                py::dict verdicts;
                for (const auto& v : r.verdicts) verdicts[py::str(v.name)] = v.holds;
                d["verdicts"] = verdicts;
                out.append(d);
            }
            return out;
        },
        py::arg("t_lo"), py::arg("t_hi"), py::arg("k") = 3, py::arg("gamma") = "3/4");

    m.def(
        "converse_check",
        [](const std::vector<std::pair<std::uint64_t, std::uint64_t>>& deps, unsigned k) {
            std::vector<SearchRecord> records;
            for (const auto& [p, t] : deps) {
                SearchRecord r;
                r.p = p;
                r.t = t;
                r.dep = true;
                records.push_back(r);
            }
            return converse_check(records, k).violations;
        },
        py::arg("deps"), py::arg("k") = 3, "Violations for (p, t) pairs; empty when all pass.");

    m.def(
        "ldc_demo",
        [](std::uint64_t p, std::size_t m, const std::vector<double>& deltas, std::uint64_t trials,
           std::uint64_t seed) {
            LdcDemoReport rep;
            {
                py::gil_scoped_release release;
                rep = ldc_demo(p, m, deltas, trials, seed);
            }
            py::dict d;
            d["p"] = rep.p;
            d["t"] = rep.t;
            d["m"] = rep.m;
            d["n"] = rep.n;
            d["length"] = rep.length;
            d["witness"] = rep.witness;
            d["s0"] = rep.s0;
            d["s1"] = rep.s1;
            d["roundtrip_ok"] = rep.roundtrip_ok;
            d["smoothness"] = smoothness_dict(rep.smoothness);
            py::list rows;
            for (const auto& r : rep.rows) rows.append(simulation_dict(r));
            d["rows"] = rows;
            return d;
        },
        py::arg("p") = 7, py::arg("m") = 4, py::arg("deltas") = std::vector<double>{0.01, 0.03, 0.05},
        py::arg("trials") = 10000, py::arg("seed") = 0);
}
