#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exact_scalar.hpp"

namespace newton_moduli {

/// Truncated Puiseux series sum c_e t^e over rational exponents. Terms at
/// exponents >= order() are unknown; an empty order means the series is exact.
class PuiseuxSeries {
public:
    using Terms = std::map<Rational, ExactScalar>;

    PuiseuxSeries() = default;
    PuiseuxSeries(ExactScalar c)  // NOLINT: constants promote implicitly
    {
        if (!c.is_zero())
            terms_.emplace(Rational(0), std::move(c));
    }
    PuiseuxSeries(long c) : PuiseuxSeries(ExactScalar(c)) {}  // NOLINT

    PuiseuxSeries(Terms terms, std::optional<Rational> order) : terms_(std::move(terms)), order_(std::move(order))
    {
        normalize();
    }

    static PuiseuxSeries monomial(ExactScalar c, const Rational& e)
    {
        Terms t;
        t.emplace(e, std::move(c));
        return {std::move(t), std::nullopt};
    }
    static PuiseuxSeries t() { return monomial(ExactScalar(1), Rational(1)); }

    const Terms& terms() const { return terms_; }
    const std::optional<Rational>& order() const { return order_; }
    bool is_exact() const { return !order_.has_value(); }
    bool is_known_zero() const { return terms_.empty() && is_exact(); }

    /// True when the coefficient of t^e is determined.
    bool knows(const Rational& e) const { return !order_ || e < *order_; }

    /// Least exponent, or empty for the exact zero series.
    std::optional<Rational> valuation() const
    {
        if (!terms_.empty())
            return terms_.begin()->first;
        if (order_)
            throw Error(ErrorCode::IndeterminateValuation,
                        "series vanishes below its truncation order " + order_->get_str());
        return std::nullopt;
    }

    ExactScalar coefficient(const Rational& e) const
    {
        if (!knows(e))
            throw Error(ErrorCode::IndeterminateValuation,
                        "coefficient of t^" + e.get_str() + " lies beyond truncation order " + order_->get_str());
        auto it = terms_.find(e);
        return it == terms_.end() ? ExactScalar() : it->second;
    }

    /// Exact series made of the terms below exponent q.
    PuiseuxSeries below(const Rational& q) const
    {
        Terms t(terms_.begin(), terms_.lower_bound(q));
        return {std::move(t), std::nullopt};
    }

    PuiseuxSeries truncated(const Rational& order) const
    {
        Rational o = order_ ? std::min(*order_, order) : order;
        Terms t(terms_.begin(), terms_.lower_bound(o));
        return {std::move(t), o};
    }

    /// Multiplication by t^q.
    PuiseuxSeries shifted(const Rational& q) const
    {
        Terms t;
        for (const auto& [e, c] : terms_)
            t.emplace(Rational(e + q), c);
        std::optional<Rational> o;
        if (order_)
            o = Rational(*order_ + q);
        return {std::move(t), o};
    }

    /// Common denominator of the exponents (the ramification index).
    Integer ramification() const
    {
        Integer r = 1;
        for (const auto& [e, c] : terms_)
            r = lcm(r, Integer(e.get_den()));
        return r;
    }

    PuiseuxSeries operator-() const
    {
        Terms t;
        for (const auto& [e, c] : terms_)
            t.emplace(e, -c);
        return {std::move(t), order_};
    }

    friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b)
    {
        std::optional<Rational> o = min_order(a.order_, b.order_);
        Terms t = a.terms_;
        for (const auto& [e, c] : b.terms_)
            t[e] += c;
        return {std::move(t), o};
    }
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

    /// Product; an unknown tail of one factor is shifted by the valuation of the other.
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b)
    {
        if (a.is_known_zero() || b.is_known_zero())
            return {};
        std::optional<Rational> o;
        if (a.order_)
            o = min_order(o, Rational(*a.order_ + b.lower_bound()));
        if (b.order_)
            o = min_order(o, Rational(*b.order_ + a.lower_bound()));
        Terms t;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_)
                t[Rational(ea + eb)] += ca * cb;
        return {std::move(t), o};
    }

    PuiseuxSeries& operator+=(const PuiseuxSeries& o) { return *this = *this + o; }
    PuiseuxSeries& operator-=(const PuiseuxSeries& o) { return *this = *this - o; }
    PuiseuxSeries& operator*=(const PuiseuxSeries& o) { return *this = *this * o; }

    friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b)
    {
        return a.terms_ == b.terms_ && a.order_ == b.order_;
    }

    /// `1 + 2*t^(1/2) - t^3 + O(t^8)`
    std::string str() const
    {
        std::string s;
        for (const auto& [e, c] : terms_) {
            std::string coeff = c.str();
            bool negative = false;
            if (c.is_real() && sgn(c.re()) < 0) {
                negative = true;
                coeff = (-c).str();
            } else if (!c.is_real() && sgn(c.re()) != 0) {
                coeff = "(" + coeff + ")";
            } else if (!c.is_real() && sgn(c.im()) < 0) {
                negative = true;
                coeff = (-c).str();
            }
            std::string mono;
            if (sgn(e) == 0)
                mono = coeff;
            else {
                std::string power = e == 1 ? "t" : "t^" + (e.get_den() == 1 && sgn(e) > 0 ? e.get_str() : "(" + e.get_str() + ")");
                mono = coeff == "1" ? power : coeff + "*" + power;
            }
            if (s.empty())
                s = negative ? "-" + mono : mono;
            else
                s += (negative ? " - " : " + ") + mono;
        }
        if (s.empty())
            s = "0";
        if (order_)
            s += " + O(t^" + (order_->get_den() == 1 && sgn(*order_) > 0 ? order_->get_str() : "(" + order_->get_str() + ")") + ")";
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const PuiseuxSeries& s) { return os << s.str(); }

private:
    static std::optional<Rational> min_order(const std::optional<Rational>& a, const std::optional<Rational>& b)
    {
        if (!a)
            return b;
        if (!b)
            return a;
        return std::min(*a, *b);
    }

    // a certified lower bound for the valuation
    Rational lower_bound() const
    {
        if (!terms_.empty())
            return terms_.begin()->first;
        return *order_;
    }

    void normalize()
    {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second.is_zero() || (order_ && it->first >= *order_))
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    Terms terms_;
    std::optional<Rational> order_;
};

inline PuiseuxSeries operator*(const ExactScalar& c, const PuiseuxSeries& s) { return PuiseuxSeries(c) * s; }

inline constexpr long default_truncation_order = 8;

namespace detail {

// series   := ['+'|'-'] term (('+'|'-') term)*
// term     := factor (('*'|'/') factor)*        (division by constants only)
// factor   := number | 'i' | 't' ['^' exponent] | '(' series ')' ['^' natural]
// exponent := ['-'] natural | '(' ['-'] natural ['/' natural] ')'
class SeriesParser {
public:
    explicit SeriesParser(std::string_view text) : text_(text) {}

    PuiseuxSeries parse()
    {
        PuiseuxSeries s = series();
        skip();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at position " + std::to_string(pos_), pos_);
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    Integer natural()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    PuiseuxSeries series()
    {
        bool negate = false;
        if (accept('-'))
            negate = true;
        else
            accept('+');
        PuiseuxSeries s = term();
        if (negate)
            s = -s;
        for (;;) {
            if (accept('+'))
                s += term();
            else if (accept('-'))
                s -= term();
            else
                return s;
        }
    }

    PuiseuxSeries term()
    {
        PuiseuxSeries s = factor();
        for (;;) {
            if (accept('*'))
                s *= factor();
            else if (accept('/')) {
                std::size_t at = pos_;
                PuiseuxSeries d = factor();
                if (d.terms().size() != 1 || d.terms().begin()->first != 0 || !d.is_exact()) {
                    pos_ = at;
                    fail("division by a non-constant");
                }
                s = (ExactScalar(1) / d.terms().begin()->second) * s;
            } else
                return s;
        }
    }

    Rational exponent()
    {
        if (accept('(')) {
            bool negative = accept('-');
            Rational e(natural());
            if (accept('/')) {
                std::size_t at = pos_;
                Integer den = natural();
                if (den == 0) {
                    pos_ = at;
                    fail("zero denominator");
                }
                e /= Rational(den);
            }
            expect(')');
            e.canonicalize();
            return negative ? Rational(-e) : e;
        }
        bool negative = accept('-');
        Rational e(natural());
        return negative ? Rational(-e) : e;
    }

    PuiseuxSeries factor()
    {
        skip();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)))
            return ExactScalar(Rational(natural()));
        if (c == 'i') {
            ++pos_;
            return ExactScalar::i();
        }
        if (c == 't') {
            ++pos_;
            Rational e = accept('^') ? exponent() : Rational(1);
            return PuiseuxSeries::monomial(ExactScalar(1), e);
        }
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (accept('(')) {
            PuiseuxSeries s = series();
            expect(')');
            if (accept('^')) {
                std::size_t at = pos_;
                Integer k = natural();
                if (k > 64) {
                    pos_ = at;
                    fail("power too large");
                }
                PuiseuxSeries r(1);
                for (long j = 0; j < k.get_si(); ++j)
                    r *= s;
                return r;
            }
            return s;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parse a series literal such as `1 + 2*t^(1/2) - t^3` or `(1/2+3/4*i)*t^(-1)`.
/// The result is truncated at `order` unless that is empty.
inline PuiseuxSeries parse_series(std::string_view text,
                                  std::optional<Rational> order = Rational(default_truncation_order))
{
    PuiseuxSeries s = detail::SeriesParser(text).parse();
    return order ? s.truncated(*order) : s;
}

/// Parse an exact scalar such as `-3/4` or `1/2-i`.
inline ExactScalar parse_scalar(std::string_view text)
{
    PuiseuxSeries s = detail::SeriesParser(text).parse();
    if (s.terms().empty())
        return ExactScalar();
    if (s.terms().size() != 1 || s.terms().begin()->first != 0)
        throw ParseError("expected a constant, got '" + std::string(text) + "'", 0);
    return s.terms().begin()->second;
}

} // namespace newton_moduli
