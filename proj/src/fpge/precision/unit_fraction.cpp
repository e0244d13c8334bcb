// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/precision/unit_fraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpge/error.hpp"
#include "fpge/precision/rng.hpp"

namespace fpge {

namespace {

void check_precision(std::uint32_t precision)
{
    if (precision == 0 || precision > kMaxPrecision) {
        throw std::invalid_argument("UnitFraction: precision must be in [1, " + std::to_string(kMaxPrecision) + "]");
    }
}

void check_same_precision(UnitFraction const& a, UnitFraction const& b)
{
    if (a.precision() != b.precision()) {
        throw std::invalid_argument("UnitFraction: operands have different precision");
    }
}

[[noreturn]] void bad_literal(std::string_view text, std::string const& why)
{
    throw Error(ErrorKind::data, "invalid genotype literal '" + std::string(text) + "': " + why);
}

bool all_digits(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

} // namespace

UnitFraction::UnitFraction(std::uint32_t precision)
    : precision_(precision)
{
    check_precision(precision);
}

UnitFraction::UnitFraction(Natural numerator, std::uint32_t precision)
    : numerator_(std::move(numerator))
    , precision_(precision)
{
    check_precision(precision);
    if (numerator_ > Natural::pow10(precision)) {
        throw std::invalid_argument("UnitFraction: numerator exceeds 10^precision");
    }
}

UnitFraction UnitFraction::one(std::uint32_t precision)
{
    return UnitFraction(Natural::pow10(precision), precision);
}

UnitFraction UnitFraction::parse(std::string_view text, std::uint32_t precision)
{
    check_precision(precision);
    if (text.empty()) {
        bad_literal(text, "empty");
    }
    auto const dot = text.find('.');
    auto const whole = text.substr(0, dot);
    auto const frac = dot == std::string_view::npos ? std::string_view {} : text.substr(dot + 1);
    if (whole.size() != 1 || !all_digits(whole) || !all_digits(frac)) {
        bad_literal(text, "expected 0, 1, 0.<digits> or 1.<zeros>");
    }
    if (dot != std::string_view::npos && frac.empty()) {
        bad_literal(text, "missing fractional digits");
    }
    if (whole[0] > '1') {
        bad_literal(text, "value outside [0, 1]");
    }
    if (whole[0] == '1') {
        if (frac.find_first_not_of('0') != std::string_view::npos) {
            bad_literal(text, "value outside [0, 1]");
        }
        if (frac.size() > precision) {
            bad_literal(text, "more than " + std::to_string(precision) + " fractional digits");
        }
        return one(precision);
    }
    if (frac.size() > precision) {
        bad_literal(text, "more than " + std::to_string(precision) + " fractional digits");
    }
    std::string digits(frac);
    digits.append(precision - frac.size(), '0');
    return UnitFraction(Natural::parse_digits(digits), precision);
}

std::string UnitFraction::to_string(bool trimmed) const
{
    if (is_one()) {
        return trimmed ? "1" : "1." + std::string(precision_, '0');
    }
    auto digits = numerator_.to_string(precision_);
    if (trimmed) {
        auto const last = digits.find_last_not_of('0');
        if (last == std::string::npos) {
            return "0";
        }
        digits.resize(last + 1);
    }
    return "0." + digits;
}

bool UnitFraction::is_one() const
{
    return numerator_.digit_count() == precision_ + 1;
}

double UnitFraction::to_double() const noexcept
{
    // Leading 17 significant digits are enough for a correctly rounded double
    // in all but pathological cases; this is display-only.
    auto const digits = numerator_.digit_count();
    if (digits == 0) {
        return 0.0;
    }
    auto text = numerator_.to_string();
    auto const keep = std::min<std::size_t>(text.size(), 19);
    auto const lead = std::stod(text.substr(0, keep));
    auto const exponent = static_cast<int>(digits) - static_cast<int>(keep) - static_cast<int>(precision_);
    return lead * std::pow(10.0, exponent);
}

std::uint32_t UnitFraction::split_in_place(std::uint32_t k)
{
    if (k == 0) {
        throw std::invalid_argument("split: production count must be positive");
    }
    numerator_.mul_small(k);
    auto const index = numerator_.take_high_digits(precision_);
    if (index >= k) {
        // Only reachable from v == 1: numerator was 10^P, now k * 10^P.
        numerator_ = Natural::pow10(precision_);
        return k - 1;
    }
    return static_cast<std::uint32_t>(index);
}

std::strong_ordering operator<=>(UnitFraction const& lhs, UnitFraction const& rhs)
{
    check_same_precision(lhs, rhs);
    return lhs.numerator_ <=> rhs.numerator_;
}

SplitResult split(UnitFraction const& v, std::uint32_t k)
{
    SplitResult result { 0, v };
    result.index = result.residual.split_in_place(k);
    return result;
}

UnitFraction wrap_add(UnitFraction const& v, UnitFraction const& w)
{
    check_same_precision(v, w);
    auto const modulus = Natural::pow10(v.precision());
    auto sum = v.numerator() + w.numerator();
    while (sum >= modulus) {
        sum -= modulus;
    }
    return UnitFraction(std::move(sum), v.precision());
}

UnitFraction wrap_sub(UnitFraction const& v, UnitFraction const& w)
{
    check_same_precision(v, w);
    auto const modulus = Natural::pow10(v.precision());
    auto a = v.numerator();
    auto const& b = w.numerator();
    while (a < b) {
        a += modulus;
    }
    a -= b;
    while (a >= modulus) {
        a -= modulus;
    }
    return UnitFraction(std::move(a), v.precision());
}

UnitFraction perturb(UnitFraction const& v, Delta const& delta)
{
    if (delta.magnitude.is_zero()) {
        return v;
    }
    if (delta.magnitude.is_one()) {
        throw std::invalid_argument("perturb: |delta| must be below 1");
    }
    return delta.negative ? wrap_sub(v, delta.magnitude) : wrap_add(v, delta.magnitude);
}

UnitFraction random_unit(Rng& rng, std::uint32_t precision)
{
    check_precision(precision);
    return UnitFraction(random_at_most(rng, Natural::pow10(precision)), precision);
}

UnitFraction random_in_range(Rng& rng, UnitFraction const& lo, UnitFraction const& hi)
{
    if (hi < lo) {
        throw std::invalid_argument("random_in_range: lo > hi");
    }
    auto offset = random_at_most(rng, hi.numerator() - lo.numerator());
    return UnitFraction(lo.numerator() + offset, lo.precision());
}

Delta random_delta(Rng& rng, UnitFraction const& half_width)
{
    auto const precision = half_width.precision();
    if (half_width.is_zero()) {
        return Delta { false, UnitFraction(precision) };
    }
    if (half_width.is_one()) {
        throw std::invalid_argument("random_delta: half width must be below 1");
    }
    auto const& h = half_width.numerator();
    // u uniform on [0, 2h - 1]; delta = u - h is uniform on [-h, h).
    auto span = h + h;
    span -= Natural(1);
    auto u = random_at_most(rng, span);
    if (u >= h) {
        return Delta { false, UnitFraction(u - h, precision) };
    }
    return Delta { true, UnitFraction(h - u, precision) };
}

} // namespace fpge
