// Thin pybind11 layer. Exact values cross as strings ("p/q"), high precision reals as decimal strings;
// the Python package turns them into Fraction / mpmath objects.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "etaq/eichler.hpp"
#include "etaq/expr.hpp"
#include "etaq/modular.hpp"
#include "etaq/rademacher.hpp"
#include "etaq/registry.hpp"
#include "etaq/sunrise.hpp"
#include "etaq/workbench.hpp"

namespace py = pybind11;
using namespace etaq;

namespace {

std::vector<std::string> coeff_strings(const QSeries& s) {
    std::vector<std::string> out;
    for (const auto& c : s.coeffs()) out.push_back(c.get_str());
    return out;
}

py::dict series_dict(const QSeries& s) {
    py::dict d;
    d["offset24"] = s.offset24();
    d["coeffs"] = coeff_strings(s);
    return d;
}

Real parse_real(const std::string& x, long digits) { return Real(x, bits_for_digits(digits + 10)); }

py::dict sunrise_dict(const SunriseValue& v, long digits) {
    py::dict d;
    d["re"] = v.value.re.str(digits);
    d["im"] = v.value.im.str(digits);
    d["cusp"] = v.cusp;
    d["terms"] = v.terms_used;
    d["error"] = v.error_estimate.str(3);
    return d;
}

Workbench& bench(const std::string& path) {
    static std::string loaded;
    static std::unique_ptr<Workbench> wb;
    std::string p = Registry::resolve_path(path);
    if (!wb || p != loaded) {
        wb = std::make_unique<Workbench>(Registry::load(p));
        loaded = p;
    }
    return *wb;
}

py::dict report_dict(const VerifyReport& r) {
    py::dict d;
    d["id"] = r.id;
    d["pass"] = r.pass;
    d["order"] = r.order;
    d["first_mismatch"] = r.first_mismatch ? py::cast(*r.first_mismatch) : py::none();
    d["mismatch"] = r.mismatch.get_str();
    d["method"] = r.method;
    d["seconds"] = r.seconds;
    return d;
}

py::list check_lines(const CheckReport& c) {
    py::list out;
    for (const auto& l : c.lines) {
        py::dict d;
        d["name"] = l.name;
        d["pass"] = l.pass;
        d["residual"] = l.residual.str(3);
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_etaq, m) {
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ModularDomainError>(m, "ModularDomainError", PyExc_ValueError);
    py::register_exception<SunriseError>(m, "SunriseError", PyExc_ValueError);
    py::register_exception<EichlerError>(m, "EichlerError", PyExc_ValueError);

    m.def("eta_quotient", [](const std::string& spec, long K) { return series_dict(quotient_expansion(EtaQuotient::parse(spec), K)); },
          py::arg("spec"), py::arg("order"));
    m.def("eta_weight", [](const std::string& spec) { return EtaQuotient::parse(spec).weight().get_str(); });

    m.def("kloosterman", [](long c, long N, long M, long n, long digits) { return kloosterman(c, N, M, n, bits_for_digits(digits)).str(digits); },
          py::arg("c"), py::arg("N"), py::arg("M"), py::arg("n"), py::arg("digits") = 30);
    m.def(
        "rademacher",
        [](long N, long M, long n, long digits, bool fixed_cutoff) {
            RademacherQuery q;
            q.N = N, q.M = M, q.n = n, q.prec = digits;
            q.policy.fixed_cutoff = fixed_cutoff;
            q.policy.all_terms_mpfr = fixed_cutoff;
            py::gil_scoped_release nogil;
            RademacherResult r = rademacher_sum(q);
            py::gil_scoped_acquire gil;
            py::dict d;
            d["value"] = r.value.str(digits);
            d["c_used"] = r.c_used;
            d["tail"] = r.tail_estimate.str(3);
            d["rational"] = r.rational ? py::cast(r.rational->value.get_str()) : py::none();
            return d;
        },
        py::arg("N"), py::arg("M"), py::arg("n"), py::arg("digits") = 50, py::arg("fixed_cutoff") = false);

    m.def("genus", &genus0, py::arg("N"));

    m.def("tally", [](long N, long k, const std::string& reg) { return bench(reg).tally(N, k).get_str(); }, py::arg("N"), py::arg("m"),
          py::arg("registry") = "");
    m.def("evaluate", [](const std::string& text, long K, const std::string& reg) { return series_dict(bench(reg).evaluate(text, K)); },
          py::arg("expr"), py::arg("order"), py::arg("registry") = "");
    m.def(
        "verify_identity",
        [](const std::string& id, long K, const std::string& reg) {
            Workbench& wb = bench(reg);
            const IdentityEntry* e = wb.registry().identity(id);
            return report_dict(e ? wb.verify_identity(*e, K) : wb.verify_identity(id, K));
        },
        py::arg("id_or_expr"), py::arg("order") = 500, py::arg("registry") = "");
    m.def(
        "verify_curve",
        [](const std::string& id, long K, const std::string& reg) {
            Workbench& wb = bench(reg);
            const CurveEntry* c = wb.registry().curve(id);
            if (!c) throw py::key_error(id);
            return report_dict(wb.verify_curve(*c, K));
        },
        py::arg("id"), py::arg("order") = 200, py::arg("registry") = "");

    m.def("sunrise2", [](const std::string& w2, long digits) { return sunrise_dict(I2(parse_real(w2, digits), digits), digits); },
          py::arg("w2"), py::arg("digits") = 30);
    m.def("sunrise3", [](const std::string& t, long digits) { return sunrise_dict(J3(parse_real(t, digits), digits), digits); },
          py::arg("t"), py::arg("digits") = 30);
    m.def(
        "bessel_moment",
        [](long a, long b, long c, const std::string& t, long digits) {
            BesselMomentSpec s{a, b, c};
            return bessel_moment_t(parse_real(t, digits), s, digits).str(digits);
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("t") = "1", py::arg("digits") = 30);
    m.def("lseries", [](const std::string& form, long s, long digits) { return lseries_value(lseries_form(form), s, digits).str(digits); },
          py::arg("form"), py::arg("s"), py::arg("digits") = 30);

    m.def("lseries_checks", [](long digits) { return check_lines(lseries_chains(digits)); }, py::arg("digits") = 30);
    m.def("quasiperiod_checks", [](long digits) { return check_lines(quasiperiod_checks(digits)); }, py::arg("digits") = 30);
    m.def("default_registry", []() { return Registry::resolve_path(); });
}
