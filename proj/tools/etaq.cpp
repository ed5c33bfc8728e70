#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "etaq/eichler.hpp"
#include "etaq/modular.hpp"
#include "etaq/rademacher.hpp"
#include "etaq/registry.hpp"
#include "etaq/sunrise.hpp"
#include "etaq/workbench.hpp"

using json = nlohmann::ordered_json;
using namespace etaq;

namespace {

struct Globals {
    long prec = 50;
    long order = 2000;
    bool json_out = false;
    std::string registry;
    int jobs = 1;
    double tolerance = 0.05;
};

// exit codes
constexpr int kOk = 0, kFail = 1, kUsage = 2;

struct Output {
    const Globals& g;

    void emit(json rec, const std::string& plain) {
        if (g.json_out)
            std::cout << rec.dump() << "\n";
        else
            std::cout << plain << "\n";
        std::cout.flush();
    }
};

// never print more digits than the value carries
std::string dec(const Real& x, long digits) { return x.str(std::min(digits, digits_for_bits(x.prec()))); }

json complex_json(const Complex& z, long digits) { return json{{"re", dec(z.re, digits)}, {"im", dec(z.im, digits)}}; }

std::string rat(const mpq_class& q) { return q.get_str(); }

Workbench make_workbench(const Globals& g) {
    WorkbenchOptions opt;
    opt.prec = g.prec;
    opt.jobs = g.jobs;
    opt.tolerance = g.tolerance;
    return Workbench(Registry::load(Registry::resolve_path(g.registry)), opt);
}

json report_json(const VerifyReport& r) {
    json j{{"id", r.id}, {"pass", r.pass}, {"order", r.order}, {"method", r.method}};
    if (r.first_mismatch) {
        j["first_mismatch"] = *r.first_mismatch;
        j["mismatch"] = rat(r.mismatch);
    }
    if (!r.detail.empty()) j["detail"] = r.detail;
    j["cite"] = r.cite;
    return j;
}

std::string report_plain(const VerifyReport& r) {
    std::string s = r.id + (r.id.empty() ? "" : ": ") + (r.pass ? "pass" : "FAIL") + " to O(q^" + std::to_string(r.order) +
                    ") [" + r.method + "]";
    if (r.first_mismatch) s += " first mismatch at q^" + std::to_string(*r.first_mismatch) + " (" + rat(r.mismatch) + ")";
    if (!r.detail.empty()) s += " " + r.detail;
    return s;
}

json check_json(const CheckReport& rep, long digits) {
    json lines = json::array();
    for (const auto& l : rep.lines)
        lines.push_back({{"name", l.name},
                         {"lhs", dec(l.lhs, digits)},
                         {"rhs", dec(l.rhs, digits)},
                         {"residual", l.residual.str(6)},
                         {"pass", l.pass},
                         {"conjectural", l.conjectural}});
    return json{{"prec", rep.prec}, {"pass", rep.all_pass()}, {"lines", lines}};
}

void check_plain(const CheckReport& rep) {
    for (const auto& l : rep.lines)
        std::cout << (l.pass ? "pass " : "FAIL ") << l.name << (l.conjectural ? " (conjectural)" : "")
                  << "  residual " << l.residual.str(3) << "\n";
}

int cmd_fourier(const Globals& g, Output& out, long N, long M, long n, std::optional<long> n_end) {
    std::vector<long> ns;
    for (long k = n; k <= (n_end ? *n_end : n); ++k) ns.push_back(k);
    auto rows = rademacher_row(N, M, ns, g.prec, {}, {}, g.jobs);
    mpfr_prec_t b = bits_for_digits(g.prec + 10);
    Registry reg = Registry::load(Registry::resolve_path(g.registry));
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        auto cert = rationalize(r.value, 64, Real(g.tolerance, b));
        // digits justified by the tail estimate
        long sig = g.prec;
        if (!r.tail_estimate.is_zero() && !r.value.is_zero())
            sig = std::clamp<long>(static_cast<long>(r.value.log10abs() - r.tail_estimate.log10abs()) + 2, 3, g.prec);
        json j{{"command", "fourier"},
               {"inputs", {{"N", N}, {"M", M}, {"n", ns[i]}, {"prec", g.prec}}},
               {"value", dec(r.value, sig)},
               {"error_estimate", r.tail_estimate.str(6)},
               {"c_used", r.c_used}};
        std::string plain = "R(" + std::to_string(N) + "," + std::to_string(M) + ")(" + std::to_string(ns[i]) + ") = ";
        if (cert) {
            j["exact"] = rat(cert->value);
            j["snap_distance"] = cert->distance.str(6);
            plain += rat(cert->value) + "  (" + dec(r.value, sig) + " +- " + r.tail_estimate.str(2) + ")";
        } else {
            plain += dec(r.value, sig) + " +- " + r.tail_estimate.str(2);
        }
        if (const auto* lv = reg.level(N); lv && M == 1)
            j["cite"] = lv->cite;
        out.emit(j, plain);
    }
    return kOk;
}

int cmd_kloosterman(const Globals& g, Output& out, long c, long N, long M, long n) {
    Real v = kloosterman(c, N, M, n, g.prec);
    json j{{"command", "kloosterman"},
           {"inputs", {{"c", c}, {"N", N}, {"M", M}, {"n", n}, {"prec", g.prec}}},
           {"value", dec(v, g.prec)}};
    out.emit(j, "K(" + std::to_string(c) + ";" + std::to_string(N) + "," + std::to_string(M) + "," + std::to_string(n) +
                    ") = " + dec(v, std::min<long>(g.prec, 30)));
    return kOk;
}

int cmd_genus(const Globals&, Output& out, long N) {
    LevelData d = level_data(N);
    json j{{"command", "genus"},
           {"inputs", {{"N", N}}},
           {"value", std::to_string(d.genus)},
           {"index", d.index},
           {"nu2", d.nu2},
           {"nu3", d.nu3},
           {"cusps", d.cusps}};
    out.emit(j, std::to_string(d.genus));
    return kOk;
}

int cmd_verify_identity(const Globals& g, Output& out, const std::string& id, const std::string& expr, bool all) {
    Workbench wb = make_workbench(g);
    std::vector<std::pair<std::string, std::string>> todo;
    if (all) {
        for (const auto& e : wb.registry().identities()) todo.push_back({e.id, ""});
    } else if (!expr.empty()) {
        todo.push_back({"", expr});
    } else {
        if (!wb.registry().identity(id)) throw RegistryError("no identity '" + id + "' in " + wb.registry().origin());
        todo.push_back({id, ""});
    }
    bool ok = true;
    for (const auto& [i, x] : todo) {
        VerifyReport r;
        if (!i.empty()) {
            r = wb.verify_identity(*wb.registry().identity(i), g.order);
        } else {
            r = wb.verify_identity(x, g.order);
            r.id = x;
        }
        ok = ok && r.pass;
        json j = report_json(r);
        j["command"] = "verify-identity";
        out.emit(j, report_plain(r));
    }
    return ok ? kOk : kFail;
}

int cmd_verify_curve(const Globals& g, Output& out, const std::string& id, bool all, const std::string& mode) {
    Workbench wb = make_workbench(g);
    CurveMode m = mode == "recipe" ? CurveMode::recipe : mode == "eta" ? CurveMode::eta : CurveMode::automatic;
    if (mode != "auto" && mode != "recipe" && mode != "eta") throw CLI::ValidationError("--mode", "auto, recipe or eta");
    std::vector<const CurveEntry*> todo;
    if (all) {
        for (const auto& c : wb.registry().curves()) todo.push_back(&c);
    } else {
        const CurveEntry* c = wb.registry().curve(id);
        if (!c) throw RegistryError("no curve '" + id + "' in " + wb.registry().origin());
        todo.push_back(c);
    }
    bool ok = true;
    for (const auto* c : todo) {
        VerifyReport r = wb.verify_curve(*c, g.order, m);
        ok = ok && r.pass;
        json j = report_json(r);
        j["command"] = "verify-curve";
        j["N"] = c->N;
        j["genus"] = c->genus;
        out.emit(j, report_plain(r));
    }
    return ok ? kOk : kFail;
}

int cmd_tally(const Globals& g, Output& out, long N, long m) {
    Workbench wb = make_workbench(g);
    mpz_class v = wb.tally(N, m);
    json j{{"command", "tally"}, {"inputs", {{"N", N}, {"m", m}}}, {"value", v.get_str()}};
    if (const auto* t = wb.registry().tally(N)) j["cite"] = t->cite;
    if (N == 36) j["closed_form"] = rat(tally36_closed_form(m));
    out.emit(j, v.get_str());
    return kOk;
}

int cmd_enumerate(const Globals& g, Output& out, long N, long m) {
    auto list = enumerate_quotients(N, m);
    json items = json::array();
    std::string plain;
    for (const auto& e : list) {
        items.push_back(e.is_unit() ? std::string("1") : e.str());
        plain += (e.is_unit() ? std::string("1") : e.str()) + "\n";
    }
    json j{{"command", "enumerate"}, {"inputs", {{"N", N}, {"m", m}}}, {"count", list.size()}, {"quotients", items}};
    // compare with the tally when the registry has one
    Workbench wb = make_workbench(g);
    int rc = kOk;
    if (wb.registry().tally(N)) {
        mpz_class t = wb.tally(N, m);
        j["tally"] = t.get_str();
        j["pass"] = t == static_cast<long>(list.size());
        if (t != static_cast<long>(list.size())) rc = kFail;
        plain += std::to_string(list.size()) + " quotients, tally " + t.get_str();
    } else {
        plain += std::to_string(list.size()) + " quotients";
    }
    out.emit(j, plain);
    return rc;
}

int cmd_parity(const Globals&, Output& out, long n_max) {
    // coefficients of the level-6 Hauptmodul, exactly
    QSeries h = quotient_expansion(EtaQuotient::parse("2^1 6^5 1^-5 3^-1"), n_max);
    long first_bad = -1, odd = 0;
    for (long n = 1; n <= n_max; ++n) {
        mpq_class c = h.coeff_at_exponent24(24 * n);
        bool is_odd = mpz_odd_p(c.get_num_mpz_t()) != 0;
        odd += is_odd;
        if (is_odd != hauptmodul_parity(n) && first_bad < 0) first_bad = n;
    }
    json j{{"command", "parity"}, {"inputs", {{"n_max", n_max}}}, {"odd_count", odd}, {"pass", first_bad < 0}};
    if (first_bad >= 0) j["first_mismatch"] = first_bad;
    out.emit(j, first_bad < 0 ? "pass: parity law holds for n <= " + std::to_string(n_max) + " (" + std::to_string(odd) +
                                    " odd coefficients)"
                              : "FAIL at n = " + std::to_string(first_bad));
    return first_bad < 0 ? kOk : kFail;
}

json sunrise_json(const char* cmd, const char* var, const std::string& in, const SunriseValue& v, long prec) {
    return json{{"command", cmd},
                {"inputs", {{var, in}, {"prec", prec}}},
                {"value", complex_json(v.value, prec)},
                {"error_estimate", v.error_estimate.str(6)},
                {"cusp", v.cusp},
                {"nome", complex_json(v.nome, 20)},
                {"terms", v.terms_used}};
}

int cmd_sunrise2(const Globals& g, Output& out, const std::string& w2s, std::optional<int> k) {
    Real w2(w2s, bits_for_digits(g.prec + 20));
    SunriseValue v = k ? I2_at(w2, *k, g.prec) : I2(w2, g.prec);
    out.emit(sunrise_json("sunrise2", "w2", w2s, v, g.prec),
             "I(" + w2s + ") = " + v.value.str(g.prec) + "   [k = " + std::to_string(v.cusp) + ", q = " + v.nome.re.str(12) +
                 "]");
    return kOk;
}

int cmd_sunrise3(const Globals& g, Output& out, const std::string& ts, std::optional<int> branch) {
    Real t(ts, bits_for_digits(g.prec + 20));
    SunriseValue v = branch ? J3_branch(t, *branch, g.prec) : J3(t, g.prec);
    out.emit(sunrise_json("sunrise3", "t", ts, v, g.prec),
             "J(" + ts + ") = " + v.value.str(g.prec) + "   [branch " + std::to_string(v.cusp) + "]");
    return kOk;
}

int cmd_hparam(const Globals& g, Output& out, long K) {
    HParamReport r = verify_H_param(K);
    json j{{"command", "hparam"}, {"inputs", {{"K", K}}}, {"pass", r.pass}, {"order", r.order}};
    if (r.first_mismatch) j["first_mismatch"] = *r.first_mismatch;
    out.emit(j, std::string(r.pass ? "pass" : "FAIL") + " through q^" + std::to_string(r.order - 1));
    (void)g;
    return r.pass ? kOk : kFail;
}

int cmd_lseries(const Globals& g, Output& out, const std::string& name, long s, long pmax) {
    const LSeriesForm& f = lseries_form(name);
    Real v = lseries_value(f, s, g.prec);
    json j{{"command", "lseries"},
           {"inputs", {{"form", name}, {"s", s}, {"prec", g.prec}}},
           {"value", dec(v, g.prec)},
           {"weight", f.weight},
           {"level", f.level}};
    std::string plain = name + "(" + std::to_string(s) + ") = " + dec(v, g.prec);
    if (pmax > 0) {
        Real e = lseries_euler_product(f, s, pmax, std::min<long>(g.prec, 30));
        j["euler_product"] = dec(e, 20);
        j["euler_pmax"] = pmax;
        plain += "\n  Euler product to p <= " + std::to_string(pmax) + ": " + dec(e, 20);
    }
    out.emit(j, plain);
    return kOk;
}

int cmd_moment(const Globals& g, Output& out, long a, long b, long c, const std::string& ts) {
    BesselMomentSpec m{a, b, c};
    mpfr_prec_t bits = bits_for_digits(g.prec + 20);
    Real t(ts, bits);
    std::string why = moment_divergence(m, t.to_double());
    if (!why.empty()) throw EichlerError("M(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ") diverges: " + why);
    Real v = ts == "1" ? bessel_moment(m, g.prec) : bessel_moment_t(t, m, g.prec);
    json j{{"command", "moment"},
           {"inputs", {{"a", a}, {"b", b}, {"c", c}, {"t", ts}, {"prec", g.prec}}},
           {"value", dec(v, g.prec)}};
    out.emit(j, "M(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ") = " + dec(v, g.prec));
    return kOk;
}

int cmd_check(const Globals& g, Output& out, const std::string& which, long L) {
    CheckReport rep;
    if (which == "quasiperiod")
        rep = quasiperiod_checks(g.prec);
    else if (which == "lseries")
        rep = lseries_chains(g.prec);
    else
        rep = onshell_sunrise(L, g.prec);
    json j = check_json(rep, std::min<long>(g.prec, 60));
    j["command"] = which + "-check";
    if (g.json_out)
        out.emit(j, "");
    else
        check_plain(rep);
    return rep.all_pass() ? kOk : kFail;
}

struct SelfCase {
    std::string name;
    std::function<bool()> run;
};

int cmd_selftest(const Globals& g, Output& out) {
    mpfr_prec_t b = bits_for_digits(40);
    Workbench wb = make_workbench(g);
    auto near = [&](const Real& x, const Real& y, long digits) { return abs(x - y) < pow10(-digits, b) * max(Real(1L, b), abs(y)); };
    std::vector<SelfCase> cases = {
        {"fourier 6 1 2 = 360",
         [&] {
             RademacherQuery q;
             q.N = 6, q.M = 1, q.n = 2, q.prec = 30;
             auto r = rademacher_sum(q);
             auto c = rationalize(r.value, 1, Real(0.05, b));
             return c && c->value == 360;
         }},
        {"genus 169 = 8", [] { return genus0(169) == 8; }},
        {"genus 144 = 13", [] { return genus0(144) == 13; }},
        {"tally 21 50 = 2938", [&] { return wb.tally(21, 50) == 2938; }},
        {"enumerate 21 4 = 6", [] { return enumerate_quotients(21, 4).size() == 6; }},
        {"parity n <= 200",
         [] {
             QSeries h = quotient_expansion(EtaQuotient::parse("2^1 6^5 1^-5 3^-1"), 200);
             for (long n = 1; n <= 200; ++n)
                 if ((mpz_odd_p(h.coeff_at_exponent24(24 * n).get_num_mpz_t()) != 0) != hauptmodul_parity(n)) return false;
             return true;
         }},
        {"verify-identity r49 to q^100", [&] { return wb.verify_identity(*wb.registry().identity("r49"), 100).pass; }},
        {"verify-curve N64 to q^200", [&] { return wb.verify_curve(*wb.registry().curve("N64"), 200).pass; }},
        {"I(1) = pi^2/4", [&] { return near(I2(Real(1L, b), 30).value.re, pi(b) * pi(b) / 4, 28); }},
        {"J(0) = 7 zeta(3)", [&] { return near(J3(Real(0L, b), 30).value.re, 7 * zeta3(30), 28); }},
        {"H parametrization to q^30", [] { return verify_H_param(30).pass; }},
        {"L6(2) = 2 M(1,5,1)/pi^2",
         [&] {
             Real l = lseries_value(lseries_form("L6"), 2, 25);
             return near(l, 2 * bessel_moment({1, 5, 1}, 25) / (pi(b) * pi(b)), 22);
         }},
    };
    bool ok = true;
    json lines = json::array();
    for (auto& c : cases) {
        bool pass = false;
        std::string err;
        try {
            pass = c.run();
        } catch (const std::exception& e) {
            err = e.what();
        }
        ok = ok && pass;
        json j{{"name", c.name}, {"pass", pass}};
        if (!err.empty()) j["error"] = err;
        lines.push_back(j);
        if (!g.json_out) std::cout << (pass ? "pass " : "FAIL ") << c.name << (err.empty() ? "" : "  (" + err + ")") << "\n";
    }
    if (g.json_out) out.emit(json{{"command", "selftest"}, {"pass", ok}, {"lines", lines}}, "");
    return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"etaq: eta quotients, Rademacher sums, sunrise integrals and Eichler integrals"};
    app.require_subcommand(1);
    Globals g;
    if (const char* env = std::getenv("ETAQ_REGISTRY")) g.registry = env;
    app.add_option("--prec", g.prec, "decimal digits")->check(CLI::Range(10L, 100000L));
    app.add_option("--order", g.order, "series order K")->check(CLI::Range(8L, 10000000L));
    app.add_flag("--json", g.json_out, "one JSON record per result");
    app.add_option("--registry", g.registry, "registry JSON (default: $ETAQ_REGISTRY, then the bundled file)");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--tolerance", g.tolerance, "snapping tolerance")->check(CLI::Range(1e-300, 0.5));
    app.fallthrough();

    Output out{g};
    std::function<int()> action;

    long N = 0, M = 0, n = 0, c = 0, m = 0, K = 0, s = 0, a = 0, bb = 0, cc = 0, L = 4, pmax = 0;
    std::optional<long> n_end;
    std::string id, expr, mode = "auto", w2s, ts, form, tmom = "1";
    bool all = false;
    std::optional<int> cusp, branch;

    auto* fourier = app.add_subcommand("fourier", "Rademacher sum R_{N,M}(n)");
    fourier->add_option("N", N)->required()->check(CLI::PositiveNumber);
    fourier->add_option("M", M)->required()->check(CLI::PositiveNumber);
    fourier->add_option("n", n)->required()->check(CLI::PositiveNumber);
    fourier->add_option("n_end", n_end, "last n of a range")->check(CLI::PositiveNumber);
    fourier->callback([&] { action = [&] { return cmd_fourier(g, out, N, M, n, n_end); }; });

    auto* kl = app.add_subcommand("kloosterman", "Kloosterman sum K(c; N, M, n)");
    kl->add_option("c", c)->required()->check(CLI::PositiveNumber);
    kl->add_option("N", N)->required()->check(CLI::PositiveNumber);
    kl->add_option("M", M)->required()->check(CLI::PositiveNumber);
    kl->add_option("n", n)->required()->check(CLI::PositiveNumber);
    kl->callback([&] { action = [&] { return cmd_kloosterman(g, out, c, N, M, n); }; });

    auto* genus = app.add_subcommand("genus", "genus of X0(N)");
    genus->add_option("N", N)->required()->check(CLI::PositiveNumber);
    genus->callback([&] { action = [&] { return cmd_genus(g, out, N); }; });

    auto* vi = app.add_subcommand("verify-identity", "check a registry identity or an expression 'lhs = rhs'");
    vi->add_option("id", id);
    vi->add_option("--expr", expr);
    vi->add_flag("--all", all);
    vi->callback([&] {
        if (id.empty() && expr.empty() && !all) throw CLI::ValidationError("verify-identity", "give an id, --expr or --all");
        action = [&] { return cmd_verify_identity(g, out, id, expr, all); };
    });

    auto* vc = app.add_subcommand("verify-curve", "check a curve relation");
    vc->add_option("id", id);
    vc->add_flag("--all", all);
    vc->add_option("--mode", mode, "auto, recipe or eta");
    vc->callback([&] {
        if (id.empty() && !all) throw CLI::ValidationError("verify-curve", "give an id or --all");
        action = [&] { return cmd_verify_curve(g, out, id, all, mode); };
    });

    auto* tally = app.add_subcommand("tally", "coefficient of x^m in T_N(x)");
    tally->add_option("N", N)->required();
    tally->add_option("m", m)->required()->check(CLI::NonNegativeNumber);
    tally->callback([&] { action = [&] { return cmd_tally(g, out, N, m); }; });

    auto* en = app.add_subcommand("enumerate", "eta quotients on Gamma0(N) with a pole of order <= m at infinity");
    en->add_option("N", N)->required()->check(CLI::PositiveNumber);
    en->add_option("m", m)->required()->check(CLI::NonNegativeNumber);
    en->callback([&] { action = [&] { return cmd_enumerate(g, out, N, m); }; });

    auto* par = app.add_subcommand("parity", "parity law of the level-6 Hauptmodul");
    par->add_option("n_max", n)->required()->check(CLI::PositiveNumber);
    par->callback([&] { action = [&] { return cmd_parity(g, out, n); }; });

    auto* s2 = app.add_subcommand("sunrise2", "two-loop sunrise I(w^2)");
    s2->add_option("w2", w2s)->required();
    s2->add_option("--cusp", cusp, "force k = 1, 2, 3 or 6");
    s2->callback([&] { action = [&] { return cmd_sunrise2(g, out, w2s, cusp); }; });

    auto* s3 = app.add_subcommand("sunrise3", "three-loop sunrise J(t)");
    s3->add_option("t", ts)->required();
    s3->add_option("--branch", branch, "force 1 or 6");
    s3->callback([&] { action = [&] { return cmd_sunrise3(g, out, ts, branch); }; });

    auto* hp = app.add_subcommand("hparam", "hypergeometric parametrization check");
    hp->add_option("K", K)->required()->check(CLI::Range(20L, 100000L));
    hp->callback([&] { action = [&] { return cmd_hparam(g, out, K); }; });

    auto* ls = app.add_subcommand("lseries", "L-series of L5, L6 or L8 at an integer s");
    ls->add_option("form", form)->required()->check(CLI::IsMember({"L5", "L6", "L8"}));
    ls->add_option("s", s)->required()->check(CLI::PositiveNumber);
    ls->add_option("--euler", pmax, "also the Euler product to p <= this");
    ls->callback([&] { action = [&] { return cmd_lseries(g, out, form, s, pmax); }; });

    auto* mo = app.add_subcommand("moment", "Bessel moment int I0^a K0^b x^c dx");
    mo->add_option("a", a)->required()->check(CLI::NonNegativeNumber);
    mo->add_option("b", bb)->required()->check(CLI::NonNegativeNumber);
    mo->add_option("c", cc)->required()->check(CLI::NonNegativeNumber);
    mo->add_option("--t", tmom, "I0(sqrt(t) x) instead of I0(x)");
    mo->callback([&] { action = [&] { return cmd_moment(g, out, a, bb, cc, tmom); }; });

    auto* qp = app.add_subcommand("quasiperiod-check", "period and quasi-period relations");
    qp->callback([&] { action = [&] { return cmd_check(g, out, "quasiperiod", 0); }; });

    auto* lc = app.add_subcommand("lseries-check", "critical-value chains of L5, L6, L8");
    lc->callback([&] { action = [&] { return cmd_check(g, out, "lseries", 0); }; });

    auto* os = app.add_subcommand("onshell-check", "S_L(1) against L-values");
    os->add_option("L", L)->check(CLI::IsMember({3L, 4L, 6L}));
    os->callback([&] { action = [&] { return cmd_check(g, out, "onshell", L); }; });

    auto* st = app.add_subcommand("selftest", "quick end-to-end checks");
    st->callback([&] { action = [&] { return cmd_selftest(g, out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    try {
        return action();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const RegistryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
}
