// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#include "fpge/precision/natural.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "fpge/precision/rng.hpp"

namespace fpge {

namespace {

constexpr std::array<std::uint32_t, 10> kPow10 = {
    1U, 10U, 100U, 1'000U, 10'000U, 100'000U, 1'000'000U, 10'000'000U, 100'000'000U, 1'000'000'000U
};

} // namespace

Natural::Natural(std::uint64_t value)
{
    while (value != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(value % kBase));
        value /= kBase;
    }
}

Natural Natural::pow10(unsigned exponent)
{
    Natural n;
    n.limbs_.assign(exponent / kLimbDigits, 0U);
    n.limbs_.push_back(kPow10[exponent % kLimbDigits]);
    return n;
}

Natural Natural::parse_digits(std::string_view digits)
{
    Natural n;
    auto end = digits.size();
    while (end > 0) {
        auto const begin = end >= kLimbDigits ? end - kLimbDigits : 0;
        std::uint32_t limb = 0;
        for (auto i = begin; i < end; ++i) {
            auto const c = digits[i];
            if (c < '0' || c > '9') {
                throw std::invalid_argument("Natural::parse_digits: non-digit character");
            }
            limb = limb * 10 + static_cast<std::uint32_t>(c - '0');
        }
        n.limbs_.push_back(limb);
        end = begin;
    }
    n.trim();
    return n;
}

unsigned Natural::digit_count() const noexcept
{
    if (limbs_.empty()) {
        return 0;
    }
    unsigned top = 1;
    while (top < kLimbDigits && limbs_.back() >= kPow10[top]) {
        ++top;
    }
    return static_cast<unsigned>((limbs_.size() - 1) * kLimbDigits) + top;
}

std::string Natural::to_string() const { return to_string(1); }

std::string Natural::to_string(unsigned width) const
{
    std::string out;
    auto const digits = std::max(digit_count(), width);
    out.reserve(digits);
    for (unsigned pos = digits; pos-- > 0;) {
        auto const limb_index = pos / kLimbDigits;
        auto const limb = limb_index < limbs_.size() ? limbs_[limb_index] : 0U;
        out.push_back(static_cast<char>('0' + (limb / kPow10[pos % kLimbDigits]) % 10));
    }
    return out;
}

bool Natural::fits_u64() const noexcept
{
    return *this <= Natural(std::numeric_limits<std::uint64_t>::max());
}

std::uint64_t Natural::to_u64() const
{
    if (!fits_u64()) {
        throw std::overflow_error("Natural::to_u64: value does not fit");
    }
    std::uint64_t v = 0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
        v = v * kBase + *it;
    }
    return v;
}

double Natural::to_double() const noexcept
{
    double v = 0.0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
        v = v * kBase + *it;
    }
    return v;
}

Natural& Natural::mul_small(std::uint32_t factor)
{
    if (factor == 0) {
        limbs_.clear();
        return *this;
    }
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        auto const t = static_cast<std::uint64_t>(limb) * factor + carry;
        limb = static_cast<std::uint32_t>(t % kBase);
        carry = t / kBase;
    }
    while (carry != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
        carry /= kBase;
    }
    return *this;
}

std::uint32_t Natural::divmod_small(std::uint32_t divisor)
{
    if (divisor == 0) {
        throw std::invalid_argument("Natural::divmod_small: division by zero");
    }
    std::uint64_t rem = 0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
        auto const cur = rem * kBase + *it;
        *it = static_cast<std::uint32_t>(cur / divisor);
        rem = cur % divisor;
    }
    trim();
    return static_cast<std::uint32_t>(rem);
}

Natural& Natural::operator+=(Natural const& rhs)
{
    if (limbs_.size() < rhs.limbs_.size()) {
        limbs_.resize(rhs.limbs_.size(), 0U);
    }
    std::uint32_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        auto t = limbs_[i] + carry + (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0U);
        carry = t >= kBase ? 1U : 0U;
        limbs_[i] = t - carry * kBase;
        if (carry == 0 && i >= rhs.limbs_.size()) {
            break;
        }
    }
    if (carry != 0) {
        limbs_.push_back(carry);
    }
    return *this;
}

Natural& Natural::operator-=(Natural const& rhs)
{
    if (*this < rhs) {
        throw std::invalid_argument("Natural: subtraction would underflow");
    }
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        auto t = static_cast<std::int64_t>(limbs_[i]) - borrow - (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0);
        borrow = t < 0 ? 1 : 0;
        limbs_[i] = static_cast<std::uint32_t>(t + borrow * kBase);
        if (borrow == 0 && i >= rhs.limbs_.size()) {
            break;
        }
    }
    trim();
    return *this;
}

std::uint64_t Natural::take_high_digits(unsigned digits)
{
    auto const whole = digits / kLimbDigits;
    auto const part = digits % kLimbDigits;
    if (limbs_.size() <= whole) {
        return 0;
    }
    __extension__ using Wide = unsigned __int128;
    Wide high = 0;
    constexpr auto kLimit = ~static_cast<Wide>(0) / kBase;
    for (auto i = limbs_.size(); i-- > whole;) {
        if (high > kLimit) {
            throw std::overflow_error("Natural::take_high_digits: quotient does not fit");
        }
        high = high * kBase + limbs_[i];
    }
    high /= kPow10[part];
    if (high >> 64 != 0) {
        throw std::overflow_error("Natural::take_high_digits: quotient does not fit");
    }
    if (part != 0) {
        limbs_[whole] %= kPow10[part];
        limbs_.resize(whole + 1);
    }
    else {
        limbs_.resize(whole);
    }
    trim();
    return static_cast<std::uint64_t>(high);
}

std::strong_ordering operator<=>(Natural const& lhs, Natural const& rhs) noexcept
{
    if (lhs.limbs_.size() != rhs.limbs_.size()) {
        return lhs.limbs_.size() <=> rhs.limbs_.size();
    }
    for (auto i = lhs.limbs_.size(); i-- > 0;) {
        if (lhs.limbs_[i] != rhs.limbs_[i]) {
            return lhs.limbs_[i] <=> rhs.limbs_[i];
        }
    }
    return std::strong_ordering::equal;
}

void Natural::trim() noexcept
{
    while (!limbs_.empty() && limbs_.back() == 0) {
        limbs_.pop_back();
    }
}

Natural random_below_pow10(Rng& rng, unsigned digits)
{
    // Most significant limb first; the top limb is drawn below 10^(digits mod 9).
    Natural n;
    auto const whole = digits / Natural::kLimbDigits;
    auto const part = digits % Natural::kLimbDigits;
    if (part != 0) {
        n = Natural(rng.uniform_below(kPow10[part]));
    }
    for (unsigned i = 0; i < whole; ++i) {
        n.mul_small(Natural::kBase);
        n += Natural(rng.uniform_below(Natural::kBase));
    }
    return n;
}

Natural random_at_most(Rng& rng, Natural const& bound)
{
    auto const digits = bound.digit_count();
    for (;;) {
        auto candidate = random_below_pow10(rng, digits);
        if (candidate <= bound) {
            return candidate;
        }
    }
}

} // namespace fpge
