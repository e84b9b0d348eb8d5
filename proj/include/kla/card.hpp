#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace kla {

/// Cardinal multiplicity: a finite count or countably infinite (omega).
class Card {
  public:
    constexpr Card() : omega_(false), n_(0) {}

    static constexpr Card fin(std::uint64_t n) {
        Card c;
        c.n_ = n;
        return c;
    }
    static constexpr Card omega() {
        Card c;
        c.omega_ = true;
        return c;
    }

    constexpr bool isOmega() const { return omega_; }
    constexpr bool isZero() const { return !omega_ && n_ == 0; }
    constexpr std::uint64_t finValue() const { return n_; }

    friend constexpr Card operator+(Card a, Card b) {
        if (a.omega_ || b.omega_) return omega();
        return fin(a.n_ + b.n_);
    }
    friend constexpr Card operator*(Card a, Card b) {
        if (a.isZero() || b.isZero()) return fin(0);
        if (a.omega_ || b.omega_) return omega();
        return fin(a.n_ * b.n_);
    }

    friend constexpr bool operator==(Card a, Card b) = default;
    friend constexpr std::strong_ordering operator<=>(Card a, Card b) {
        if (a.omega_ != b.omega_)
            return a.omega_ ? std::strong_ordering::greater
                            : std::strong_ordering::less;
        return a.n_ <=> b.n_;
    }

    std::string toString() const {
        return omega_ ? "oo" : std::to_string(n_);
    }

  private:
    bool omega_;
    std::uint64_t n_;
};

} // namespace kla
