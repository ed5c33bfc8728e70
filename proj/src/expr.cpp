#include "etaq/expr.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace etaq {

mpq_class coefficient_at(const QSeries& s, long e) {
    if (s.offset24() % 24 != 0) throw ExprError("series has fractional exponents");
    long k = e - s.offset24() / 24;
    if (k < 0) return 0;
    if (k >= s.order()) throw ExprError("coefficient of q^" + std::to_string(e) + " lies beyond the series horizon");
    return s.coeff(k);
}

QSeries truncate_at(const QSeries& s, long K) {
    long ord = (24 * K - s.offset24() + 23) / 24;
    if (24 * K - s.offset24() <= 0) ord = 0;
    if (ord >= s.order()) return s;
    return s.truncated(std::max(0L, ord));
}

namespace {

enum class Tok { num, ident, op, end };

struct Token {
    Tok kind;
    std::string text;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::num, s.substr(i, j - i)});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Tok::ident, s.substr(i, j - i)});
            i = j;
        } else if (ch == ':' && i + 1 < s.size() && s[i + 1] == '=') {
            out.push_back({Tok::op, ":="});
            i += 2;
        } else if (std::string("+-*/^(),=;").find(ch) != std::string::npos) {
            out.push_back({Tok::op, std::string(1, ch)});
            ++i;
        } else {
            throw ExprError(std::string("unexpected character '") + ch + "' in expression");
        }
    }
    out.push_back({Tok::end, ""});
    return out;
}

const std::set<std::string> kFunctions = {"eta",   "psi",      "phi", "theta", "sigma",     "G", "R", "C", "form",
                                          "D",     "U",        "subst", "restrict", "rev", "coeffshift"};

struct NeedOrder {
    long order;
};

// c q^qexp prod eta_d^r_d, kept symbolic until it meets a sum
struct Val {
    enum Kind { constant, mono, series } kind = constant;
    mpq_class c = 0;
    EtaQuotient e;
    long qexp = 0;
    QSeries s;
};

Val make_const(const mpq_class& c) {
    Val v;
    v.kind = Val::constant;
    v.c = c;
    return v;
}

Val make_series(QSeries s) {
    Val v;
    v.kind = Val::series;
    v.s = std::move(s);
    return v;
}

Val make_mono(const mpq_class& c, EtaQuotient e, long qexp) {
    Val v;
    v.kind = Val::mono;
    v.c = c;
    v.e = std::move(e);
    v.qexp = qexp;
    return v;
}

class Evaluator {
public:
    Evaluator(const std::vector<Token>& toks, long K, SeriesContext* ctx, ExprRefs* refs,
              const std::map<std::string, QSeries>* known = nullptr)
        : t_(toks), K_(K), ctx_(ctx), refs_(refs) {
        if (known)
            for (const auto& kv : *known) locals_.insert(kv.first);
    }

    // returns the value of the final statement
    Val run() {
        Val last = make_const(0);
        while (true) {
            if (peek().kind == Tok::end) break;
            if (peek().kind == Tok::ident && t_[pos_ + 1].kind == Tok::op && t_[pos_ + 1].text == ":=") {
                std::string name = next().text;
                next();
                Val v = expr();
                if (ctx_) ctx_->vars[name] = to_series(v);
                else locals_.insert(name);
            } else {
                Val v = expr();
                if (is_op("=")) {
                    next();
                    Val r = expr();
                    v = sub(v, r);
                }
                last = v;
            }
            if (is_op(";")) {
                next();
                continue;
            }
            if (peek().kind != Tok::end) throw ExprError("unexpected '" + peek().text + "' in expression");
        }
        return last;
    }

    QSeries to_series(const Val& v) {
        switch (v.kind) {
            case Val::constant:
                return QSeries::constant(v.c, std::max(1L, K_));
            case Val::mono: {
                long off24 = v.e.offset24() + 24 * v.qexp;
                long ord = (24 * K_ - off24 + 23) / 24;
                if (ord < 1) ord = 1;
                QSeries s = v.e.is_unit() ? QSeries::one(ord) : quotient_expansion(v.e, ord);
                s = s.shifted(v.qexp);
                return v.c == 1 ? s : s.scaled(v.c);
            }
            case Val::series:
                return v.s;
        }
        return {};
    }

private:
    const Token& peek() const { return t_[pos_]; }
    const Token& next() { return t_[pos_++]; }
    bool is_op(const char* o) const { return peek().kind == Tok::op && peek().text == o; }
    void expect(const char* o) {
        if (!is_op(o)) throw ExprError(std::string("expected '") + o + "' but found '" + peek().text + "'");
        next();
    }

    bool dry() const { return ctx_ == nullptr; }

    Val expr() {
        Val v = term();
        while (is_op("+") || is_op("-")) {
            bool plus = next().text == "+";
            Val r = term();
            v = plus ? add(v, r) : sub(v, r);
        }
        return v;
    }

    bool starts_primary() const {
        const Token& k = peek();
        return k.kind == Tok::num || k.kind == Tok::ident || (k.kind == Tok::op && k.text == "(");
    }

    Val term() {
        Val v = unary();
        while (true) {
            if (is_op("*")) {
                next();
                v = mul(v, unary());
            } else if (is_op("/")) {
                next();
                v = div(v, unary());
            } else if (starts_primary()) {
                v = mul(v, power());
            } else {
                break;
            }
        }
        return v;
    }

    Val unary() {
        if (is_op("-")) {
            next();
            return neg(unary());
        }
        if (is_op("+")) {
            next();
            return unary();
        }
        return power();
    }

    Val power() {
        Val b = primary();
        if (is_op("^")) {
            next();
            long sign = 1;
            if (is_op("-")) {
                next();
                sign = -1;
            }
            Val e = primary();
            return pw(b, sign * as_long(e, "exponent"));
        }
        return b;
    }

    Val primary() {
        const Token& k = next();
        if (k.kind == Tok::num) return make_const(mpq_class(mpz_class(k.text)));
        if (k.kind == Tok::op && k.text == "(") {
            Val v = expr();
            expect(")");
            return v;
        }
        if (k.kind == Tok::ident) {
            if (kFunctions.count(k.text) && is_op("(")) return call(k.text);
            bool bound = dry() ? locals_.count(k.text) > 0 : ctx_->vars.count(k.text) > 0;
            if (!bound && (k.text == "q" || k.text == "x")) return make_mono(1, EtaQuotient(), 1);
            if (dry()) {
                if (!refs_ && !locals_.count(k.text)) throw ExprError("unknown name '" + k.text + "'");
                return make_const(0);
            }
            auto it = ctx_->vars.find(k.text);
            if (it == ctx_->vars.end()) throw ExprError("unknown name '" + k.text + "'");
            return make_series(it->second);
        }
        throw ExprError("unexpected '" + k.text + "' in expression");
    }

    std::vector<Val> args() {
        expect("(");
        std::vector<Val> a;
        if (is_op(")")) {
            next();
            return a;
        }
        while (true) {
            a.push_back(expr());
            if (is_op(",")) {
                next();
                continue;
            }
            expect(")");
            return a;
        }
    }

    std::string name_arg() {
        expect("(");
        if (peek().kind != Tok::ident) throw ExprError("form() needs a name");
        std::string n = next().text;
        expect(")");
        return n;
    }

    long as_long(const Val& v, const char* what) {
        if (v.kind != Val::constant || v.c.get_den() != 1 || !v.c.get_num().fits_slong_p())
            throw ExprError(std::string(what) + " must be an integer");
        return v.c.get_num().get_si();
    }

    void arity(const std::string& f, const std::vector<Val>& a, size_t n) {
        if (a.size() != n) throw ExprError(f + " takes " + std::to_string(n) + " arguments");
    }

    Val call(const std::string& f) {
        if (f == "form") {
            std::string n = name_arg();
            if (refs_) refs_->forms.push_back(n);
            if (dry()) return make_const(0);
            if (!ctx_->form) throw ExprError("no form resolver available for '" + n + "'");
            return make_series(ctx_->form(n, K_));
        }
        auto a = args();
        if (f == "eta" || f == "psi" || f == "phi") {
            arity(f, a, 1);
            long d = as_long(a[0], "eta index");
            if (d < 1) throw ExprError(f + " index must be positive");
            if (f == "eta") return make_mono(1, EtaQuotient({{d, 1}}), 0);
            if (f == "psi") return make_mono(1, EtaQuotient({{2 * d, 2}, {d, -1}}), 0);
            return make_mono(1, EtaQuotient({{2 * d, 5}, {d, -2}, {4 * d, -2}}), 0);
        }
        if (f == "theta") {
            arity(f, a, 2);
            long x = as_long(a[0], "theta index"), y = as_long(a[1], "theta index");
            if (dry()) return make_const(0);
            return make_series(theta_series(x, y, std::max(1L, K_)));
        }
        if (f == "sigma") {
            arity(f, a, 1);
            long k = as_long(a[0], "sigma index");
            if (dry()) return make_const(0);
            return make_series(lambert_series({{1, 1}}, 1, k, std::max(1L, K_)));
        }
        if (f == "G" || f == "R" || f == "C") {
            arity(f, a, 2);
            long N = as_long(a[0], "level"), M = as_long(a[1], "index");
            if (refs_ && f != "C") (f == "G" ? refs_->gbar : refs_->rsum).push_back({N, M});
            if (dry()) return make_const(0);
            auto& cb = f == "G" ? ctx_->gbar : f == "R" ? ctx_->rsum : ctx_->scheme;
            if (!cb) throw ExprError("no resolver available for " + f);
            return make_series(cb(N, M, K_));
        }
        if (a.empty()) throw ExprError(f + " needs arguments");
        if (dry()) return make_const(0);
        if (f == "D") {
            arity(f, a, 1);
            return make_series(to_series(a[0]).derivative());
        }
        if (f == "subst") {
            arity(f, a, 2);
            long d = as_long(a[1], "substitution power");
            if (d < 1) throw ExprError("subst needs a positive power");
            return make_series(to_series(a[0]).substitute_power(d));
        }
        if (f == "coeffshift") {
            arity(f, a, 2);
            return make_series(to_series(a[0]).shifted(as_long(a[1], "shift")));
        }
        QSeries s = to_series(a[0]);
        if (s.offset24() % 24 != 0) throw ExprError(f + " needs integral exponents");
        long off = s.offset24() / 24;
        if (f == "U") {
            arity(f, a, 2);
            long m = as_long(a[1], "U index");
            if (m < 1) throw ExprError("U needs a positive index");
            long first = off >= 0 ? (off + m - 1) / m : -((-off) / m);
            long horizon = off + s.order();
            std::vector<mpq_class> c;
            for (long e = first; e * m < horizon; ++e) c.push_back(e * m >= off ? s.coeff(e * m - off) : mpq_class(0));
            return make_series(QSeries::from_rationals(24 * first, c));
        }
        if (f == "restrict") {
            if (a.size() < 3) throw ExprError("restrict needs a series, a modulus and residues");
            long m = as_long(a[1], "modulus");
            if (m < 1) throw ExprError("restrict needs a positive modulus");
            std::set<long> keep;
            for (size_t i = 2; i < a.size(); ++i) keep.insert(((as_long(a[i], "residue") % m) + m) % m);
            std::vector<mpq_class> c(static_cast<size_t>(s.order()));
            for (long k = 0; k < s.order(); ++k)
                if (keep.count((((off + k) % m) + m) % m)) c[static_cast<size_t>(k)] = s.coeff(k);
            return make_series(QSeries::from_rationals(s.offset24(), c));
        }
        if (f == "rev") {
            arity(f, a, 2);
            long n = as_long(a[1], "degree");
            if (off < 0) throw ExprError("rev needs a polynomial");
            if (off + s.order() <= n) throw NeedOrder{n + 1};
            std::vector<mpq_class> c(static_cast<size_t>(n + 1));
            for (long e = off; e <= n; ++e) c[static_cast<size_t>(n - e)] = s.coeff(e - off);
            // exact polynomial: pad with zeros up to the working order
            c.resize(static_cast<size_t>(std::max(n + 1, K_)));
            return make_series(QSeries::from_rationals(0, c));
        }
        throw ExprError("unknown function " + f);
    }

    Val neg(const Val& v) {
        Val r = v;
        if (v.kind == Val::series) r.s = v.s.negate();
        else r.c = -v.c;
        return r;
    }

    Val add(const Val& a, const Val& b) {
        if (dry()) return make_const(0);
        if (a.kind == Val::constant && b.kind == Val::constant) return make_const(a.c + b.c);
        if (a.kind == Val::constant) return make_series(to_series(b) + a.c);
        if (b.kind == Val::constant) return make_series(to_series(a) + b.c);
        return make_series(to_series(a) + to_series(b));
    }

    Val sub(const Val& a, const Val& b) { return add(a, neg(b)); }

    Val mul(const Val& a, const Val& b) {
        if (dry()) return make_const(0);
        if (a.kind == Val::constant && b.kind == Val::constant) return make_const(a.c * b.c);
        if (a.kind == Val::constant || b.kind == Val::constant) {
            const Val& k = a.kind == Val::constant ? a : b;
            Val o = a.kind == Val::constant ? b : a;
            if (o.kind == Val::mono) o.c *= k.c;
            else o.s = o.s.scaled(k.c);
            return o;
        }
        if (a.kind == Val::mono && b.kind == Val::mono) return make_mono(a.c * b.c, a.e * b.e, a.qexp + b.qexp);
        return make_series(to_series(a) * to_series(b));
    }

    Val div(const Val& a, const Val& b) {
        if (dry()) return make_const(0);
        if (b.kind == Val::constant) {
            if (b.c == 0) throw ExprError("division by zero");
            return mul(a, make_const(1 / b.c));
        }
        if (b.kind == Val::mono) {
            if (b.c == 0) throw ExprError("division by zero");
            return mul(a, make_mono(1 / b.c, b.e.pow(-1), -b.qexp));
        }
        return make_series(to_series(a) / b.s);
    }

    Val pw(const Val& b, long k) {
        if (dry()) return make_const(0);
        if (b.kind == Val::constant) {
            if (b.c == 0 && k < 0) throw ExprError("division by zero");
            mpq_class r = 1;
            for (long i = 0; i < std::labs(k); ++i) r *= b.c;
            return make_const(k < 0 ? mpq_class(1 / r) : r);
        }
        if (b.kind == Val::mono) {
            mpq_class r = 1;
            for (long i = 0; i < std::labs(k); ++i) r *= b.c;
            if (k < 0) r = 1 / r;
            return make_mono(r, b.e.pow(k), b.qexp * k);
        }
        return make_series(pow(b.s, k));
    }

    std::vector<Token> t_;
    size_t pos_ = 0;
    long K_;
    SeriesContext* ctx_;
    ExprRefs* refs_;
    std::set<std::string> locals_;
};

long horizon_exponent(const QSeries& s) {
    // exponents strictly below this are known
    long h = s.horizon24();
    return h >= 0 ? (h + 23) / 24 : -((-h) / 24);
}

}  // namespace

QSeries eval_expression(const std::string& text, long K, SeriesContext& ctx) {
    auto toks = tokenize(text);
    {
        Evaluator check(toks, K, nullptr, nullptr, &ctx.vars);
        check.run();
    }
    long work = K + 8;
    for (int attempt = 0; attempt < 8; ++attempt) {
        SeriesContext local = ctx;
        Evaluator ev(toks, work, &local, nullptr);
        Val v;
        try {
            v = ev.run();
        } catch (const NeedOrder& need) {
            work = std::max(work + 8, need.order + 8);
            continue;
        }
        QSeries s = ev.to_series(v);
        long h = horizon_exponent(s);
        if (v.kind == Val::constant || h >= K) {
            for (auto& [k, val] : local.vars)
                if (!ctx.vars.count(k)) ctx.vars[k] = val;
            return truncate_at(s, K);
        }
        long deficit = K - h;
        work = work + deficit + work * deficit / std::max(1L, K) + 8;
    }
    throw ExprError("could not reach the requested order for: " + text);
}

ExprRefs scan_expression(const std::string& text) {
    ExprRefs refs;
    Evaluator ev(tokenize(text), 1, nullptr, &refs);
    ev.run();
    return refs;
}

}  // namespace etaq
