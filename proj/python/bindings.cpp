#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zetafrac/report.hpp"
#include "zetafrac/scanner.hpp"
#include "zetafrac/series.hpp"
#include "zetafrac/theorems.hpp"

namespace py = pybind11;
using namespace zetafrac;

namespace {

py::int_ to_py(const BigInt& v)
{
    const std::string hex = v.get_str(16);
    PyObject* obj = PyLong_FromString(hex.c_str(), nullptr, 16);
    if (!obj) {
        throw py::error_already_set();
    }
    return py::reinterpret_steal<py::int_>(obj);
}

py::object to_py(const Rational& v)
{
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(to_py(v.num()), to_py(v.den()));
}

py::tuple to_py(const Enclosure& e)
{
    return py::make_tuple(to_py(e.lo()), to_py(e.hi()));
}

// Accepts int, Fraction or a string such as "2/3".
Rational from_py(const py::handle& obj)
{
    return Rational::parse(py::str(obj).cast<std::string>());
}

py::dict claim_dict(const ClaimResult& r)
{
    py::dict d;
    d["claim"] = r.claim;
    d["n"] = r.n;
    d["verdict"] = std::string(to_string(r.verdict));
    d["k"] = r.k ? py::object(py::int_(*r.k)) : py::none();
    d["m"] = r.m ? py::object(py::int_(*r.m)) : py::none();
    d["value"] = r.value ? py::object(to_py(*r.value)) : py::none();
    d["lower"] = r.lower ? py::object(to_py(r.lower->lo())) : py::none();
    d["upper"] = r.upper ? py::object(to_py(r.upper->hi())) : py::none();
    d["detail"] = r.detail;
    return d;
}

py::dict record_dict(const ScanRecord& r)
{
    py::dict d;
    d["n"] = r.n;
    d["frac"] = to_py(r.frac);
    d["below_threshold"] = r.below_threshold;
    d["log10_margin"] = r.log10_margin;
    return d;
}

}  // namespace

PYBIND11_MODULE(_zetafrac, m)
{
    m.doc() = "Certified floors of 1/(zeta(n)-1), prime zeta bounds and exact scans of {(p/q)^n}";

    static py::exception<IntegrityError> integrity(m, "IntegrityError");
    static py::exception<StraddlesInteger> straddles(m, "StraddlesInteger");
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ResumeError>(m, "ResumeError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const IntegrityError& e) {
            PyErr_SetString(integrity.ptr(), e.what());
        } catch (const StraddlesInteger& e) {
            PyErr_SetString(straddles.ptr(), e.what());
        }
    });

    m.def(
        "pow_decompose",
        [](unsigned long p, unsigned long q, unsigned long n) {
            const RationalPower rp = pow_decompose(BigInt(p), BigInt(q), n);
            return py::make_tuple(to_py(rp.int_part), to_py(rp.frac()));
        },
        py::arg("p"), py::arg("q"), py::arg("n"), "(floor((p/q)^n), {(p/q)^n}) exactly");

    m.def(
        "cf_second_term",
        [](unsigned long n, unsigned max_rounds, unsigned long precision_bits) {
            BigInt v;
            {
                py::gil_scoped_release release;
                v = cf_second_term(n, max_rounds, precision_bits);
            }
            return to_py(v);
        },
        py::arg("n"), py::arg("max_rounds") = kDefaultMaxRounds, py::arg("precision_bits") = 0);

    m.def(
        "zeta_minus1",
        [](unsigned long s, std::uint64_t terms, unsigned long precision_bits) {
            return to_py(zeta_minus1({s, terms, precision_bits}));
        },
        py::arg("s"), py::arg("terms"), py::arg("precision_bits") = 0, "Enclosure (lo, hi) of zeta(s) - 1");

    m.def(
        "prime_zeta",
        [](unsigned long s, std::uint64_t limit, unsigned long precision_bits) {
            return to_py(prime_zeta({s, 0, precision_bits}, sieve(limit)));
        },
        py::arg("s"), py::arg("limit"), py::arg("precision_bits") = 0, "Enclosure (lo, hi) of P(s)");

    m.def(
        "epsilon", [](unsigned long s, const py::object& x) { return to_py(epsilon(from_py(x), s)); },
        py::arg("s"), py::arg("x") = 1);
    m.def("delta", [](unsigned long s) { return to_py(delta(s)); }, py::arg("s"));

    m.def(
        "classify_k",
        [](unsigned long n) {
            KRecord r;
            {
                py::gil_scoped_release release;
                r = classify_k(n);
            }
            py::dict d;
            d["n"] = r.n;
            d["k"] = r.k;
            d["floor_lhs"] = to_py(r.floor_lhs);
            d["floor_pow"] = to_py(r.floor_pow);
            d["value"] = to_py(r.recip_enclosure);
            d["frac_sum"] = to_py(r.frac_sum_enclosure);
            d["frac_sum_verdict"] = std::string(to_string(r.sandwich));
            return d;
        },
        py::arg("n"));

    m.def(
        "classify_m",
        [](unsigned long n) {
            MRecord r;
            {
                py::gil_scoped_release release;
                r = classify_m(n);
            }
            return claim_dict(to_claim(r));
        },
        py::arg("n"));

    m.def(
        "check_claim",
        [](const std::string& claim, unsigned long n, const py::object& x, unsigned max_rounds,
           unsigned long precision_bits) {
            const Rational xr = from_py(x);
            ClaimResult r;
            {
                py::gil_scoped_release release;
                r = check_claim(claim, n, EvalOptions{max_rounds, precision_bits}, xr);
            }
            return claim_dict(r);
        },
        py::arg("claim"), py::arg("n"), py::arg("x") = "2/3", py::arg("max_rounds") = kDefaultMaxRounds,
        py::arg("precision_bits") = 0);

    m.def(
        "check_prime_gap_real",
        [](const py::object& s) {
            const std::string text = py::str(s).cast<std::string>();
            return claim_dict(check_prime_gap_real(static_cast<long double>(Rational::parse(text).to_double()), text));
        },
        py::arg("s"));

    m.def("claim_ids", &claim_ids);

    m.def(
        "scan",
        [](std::uint64_t n_min, std::uint64_t n_max, unsigned long p, unsigned long q, const py::object& threshold,
           std::uint64_t stride, unsigned workers, bool prefilter) {
            ScanConfig cfg;
            cfg.p = p;
            cfg.q = q;
            cfg.n_min = n_min;
            cfg.n_max = n_max;
            cfg.sample_stride = stride;
            cfg.workers = workers;
            cfg.prefilter = prefilter;
            if (threshold.is_none()) {
                cfg.mode = ThresholdMode::EpsilonAdaptive;
            } else {
                cfg.mode = ThresholdMode::Fixed;
                cfg.threshold = from_py(threshold);
            }
            std::vector<ScanRecord> records;
            ScanSummary s;
            {
                py::gil_scoped_release release;
                s = scan(cfg, [&](const ScanRecord& r) { records.push_back(r); });
            }
            py::list out;
            for (const auto& r : records) {
                out.append(record_dict(r));
            }
            py::dict summary;
            summary["hits"] = s.hits;
            summary["scanned"] = s.scanned;
            summary["exact_checks"] = s.exact_checks;
            summary["argmin_n"] = s.argmin_n ? py::object(py::int_(*s.argmin_n)) : py::none();
            summary["min_frac"] = s.argmin_n ? to_py(s.min_frac) : py::none();
            summary["config_hash"] = s.config_hash;
            return py::make_tuple(out, summary);
        },
        py::arg("n_min") = 1, py::arg("n_max") = 1000, py::arg("p") = 4, py::arg("q") = 3,
        py::arg("threshold") = py::none(), py::arg("stride") = 1000, py::arg("workers") = 1,
        py::arg("prefilter") = true,
        "Exact scan of {(p/q)^n}; threshold None means eps(n). Returns (records, summary).");
}
