#include "etaq/registry.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef ETAQ_DEFAULT_REGISTRY
#define ETAQ_DEFAULT_REGISTRY "data/registry.json"
#endif

namespace etaq {

using nlohmann::json;

namespace {

mpz_class to_mpz(const json& v) {
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_string()) return mpz_class(v.get<std::string>());
    throw RegistryError("expected an integer, got " + v.dump());
}

mpq_class to_mpq(const json& v) {
    if (v.is_number_integer()) return mpq_class(to_mpz(v));
    if (v.is_string()) {
        mpq_class q(v.get<std::string>());
        q.canonicalize();
        return q;
    }
    throw RegistryError("expected a rational, got " + v.dump());
}

std::string str_or(const json& o, const char* key) { return o.contains(key) ? o.at(key).get<std::string>() : std::string(); }

EllipticCurve to_curve(const json& a) {
    if (!a.is_array() || a.size() != 5) throw RegistryError("curve needs [a1,a2,a3,a4,a6]");
    return EllipticCurve{to_mpz(a[0]), to_mpz(a[1]), to_mpz(a[2]), to_mpz(a[3]), to_mpz(a[4])};
}

const json& section(const json& j, const char* name) {
    static const json empty = json::array();
    return j.contains(name) ? j.at(name) : empty;
}

}  // namespace

Registry Registry::parse(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw RegistryError(origin + ": " + e.what());
    }
    Registry r;
    r.origin_ = origin;
    try {
        for (const auto& o : section(j, "LEVELS")) {
            LevelEntry e;
            e.N = o.at("N").get<long>();
            if (o.contains("genus")) e.genus = o.at("genus").get<long>();
            if (o.contains("R1")) e.R1 = to_mpz(o.at("R1"));
            e.hauptmodul = str_or(o, "hauptmodul");
            e.oeis = str_or(o, "oeis");
            if (o.contains("zero_primes")) e.zero_primes = o.at("zero_primes").get<std::vector<long>>();
            if (o.contains("zero_rule")) {
                e.zero_mod = o.at("zero_rule").at("mod").get<long>();
                e.zero_residues = o.at("zero_rule").at("residues").get<std::vector<long>>();
            }
            e.rational = o.value("rational", false);
            e.cite = str_or(o, "cite");
            r.levels_.push_back(std::move(e));
        }
        for (const auto& o : section(j, "SEQUENCES")) {
            SequenceEntry e;
            e.id = o.at("id").get<std::string>();
            e.expr = o.at("expr").get<std::string>();
            e.D = to_mpz(o.at("D"));
            for (const auto& t : o.at("terms")) e.terms.push_back(to_mpz(t));
            e.cite = str_or(o, "cite");
            r.sequences_.push_back(std::move(e));
        }
        for (const auto& o : section(j, "FORMS")) {
            FormEntry e;
            e.name = o.at("name").get<std::string>();
            e.N = o.at("N").get<long>();
            e.expr = str_or(o, "expr");
            if (o.contains("curve")) e.curve = to_curve(o.at("curve"));
            if (e.expr.empty() && !e.curve) throw RegistryError("form " + e.name + " has no source");
            e.head = str_or(o, "head");
            e.head_order = o.value("head_order", 0L);
            e.cite = str_or(o, "cite");
            r.forms_.push_back(std::move(e));
        }
        for (const auto& o : section(j, "SCHEMES")) {
            SchemeEntry e;
            e.N = o.at("N").get<long>();
            if (o.contains("coef"))
                for (const auto& [k, v] : o.at("coef").items()) e.coef[std::stol(k)] = v.get<std::string>();
            if (o.contains("gaps")) e.gaps = o.at("gaps").get<std::vector<long>>();
            if (o.contains("span")) e.span = o.at("span").get<std::vector<std::string>>();
            if (o.contains("claims"))
                for (const auto& c : o.at("claims")) {
                    SchemeClaim cl;
                    cl.M = c.at("M").get<long>();
                    for (const auto& [k, v] : c.at("coef").items()) cl.coef[std::stol(k)] = to_mpq(v);
                    e.claims.push_back(std::move(cl));
                }
            e.cite = str_or(o, "cite");
            r.schemes_.push_back(std::move(e));
        }
        for (const auto& o : section(j, "CURVES")) {
            CurveEntry e;
            e.id = o.at("id").get<std::string>();
            e.N = o.at("N").get<long>();
            e.genus = o.value("genus", 0L);
            e.poly = o.at("poly").get<std::string>();
            e.X = o.at("X").get<std::string>();
            e.Y = o.at("Y").get<std::string>();
            e.X_eta = str_or(o, "X_eta");
            e.Y_eta = str_or(o, "Y_eta");
            e.cite = str_or(o, "cite");
            r.curves_.push_back(std::move(e));
        }
        for (const auto& o : section(j, "IDENTITIES")) {
            IdentityEntry e;
            e.id = o.at("id").get<std::string>();
            e.group = str_or(o, "group");
            e.expr = o.at("expr").get<std::string>();
            e.cite = str_or(o, "cite");
            e.order = o.value("order", 0L);
            r.identities_.push_back(std::move(e));
        }
        for (const auto& o : section(j, "TALLIES")) {
            TallyEntry e;
            e.N = o.at("N").get<long>();
            e.T = o.at("T").get<std::string>();
            if (o.contains("checks"))
                for (const auto& [k, v] : o.at("checks").items()) e.checks[std::stol(k)] = to_mpz(v);
            e.cite = str_or(o, "cite");
            r.tallies_.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw RegistryError(origin + ": " + e.what());
    }
    return r;
}

Registry Registry::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RegistryError("cannot open registry " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::string Registry::resolve_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("ETAQ_REGISTRY"); env && *env) return env;
    return ETAQ_DEFAULT_REGISTRY;
}

const LevelEntry* Registry::level(long N) const {
    for (const auto& e : levels_)
        if (e.N == N) return &e;
    return nullptr;
}
const FormEntry* Registry::form(const std::string& name) const {
    for (const auto& e : forms_)
        if (e.name == name) return &e;
    return nullptr;
}
const SchemeEntry* Registry::scheme(long N) const {
    for (const auto& e : schemes_)
        if (e.N == N) return &e;
    return nullptr;
}
const CurveEntry* Registry::curve(const std::string& id) const {
    for (const auto& e : curves_)
        if (e.id == id) return &e;
    return nullptr;
}
const IdentityEntry* Registry::identity(const std::string& id) const {
    for (const auto& e : identities_)
        if (e.id == id) return &e;
    return nullptr;
}
const TallyEntry* Registry::tally(long N) const {
    for (const auto& e : tallies_)
        if (e.N == N) return &e;
    return nullptr;
}

}  // namespace etaq
