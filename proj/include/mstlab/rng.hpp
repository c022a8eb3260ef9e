#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

namespace mstlab {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

// purpose tags are hashed names so new tags never shift old streams
constexpr std::uint64_t tag(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// uniform in [0,1) from a 64-bit hash value
inline double unit_from_bits(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// xoshiro256** with a stored key so child streams can be derived
// without touching the consumed state
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t key = 0) : key_(key) {
        std::uint64_t x = key;
        for (auto& w : s_) {
            x = splitmix64(x);
            w = x;
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    static Rng stream(std::uint64_t seed, std::uint64_t replica, std::uint64_t purpose) {
        return Rng(mix(mix(splitmix64(seed), replica), purpose));
    }

    Rng fork(std::uint64_t purpose) const { return Rng(mix(key_, purpose)); }
    Rng fork(std::uint64_t purpose, std::uint64_t index) const {
        return Rng(mix(mix(key_, purpose), index));
    }

    std::uint64_t key() const { return key_; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next(); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // [0,1)
    double uniform() { return unit_from_bits(next()); }
    // (0,1)
    double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform integer in [0, n), Lemire's nearly divisionless method
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double rate = 1.0) { return -std::log(uniform_open()) / rate; }

    // Marsaglia polar method
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Marsaglia-Tsang, boosted for shape < 1
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_open(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    // number of failures before the first success
    std::uint64_t geometric(double p) {
        if (p >= 1.0) return 0;
        const double g = std::floor(std::log(uniform_open()) / std::log1p(-p));
        if (g >= 9.0e18) return std::numeric_limits<std::uint64_t>::max() / 2;
        return static_cast<std::uint64_t>(g);
    }

    // exact: multiplication method for small means, gamma splitting otherwise
    std::uint64_t poisson(double mu) {
        std::uint64_t acc = 0;
        while (mu >= 30.0) {
            const auto m = static_cast<std::uint64_t>(std::floor(0.875 * mu));
            const double x = gamma(static_cast<double>(m));
            if (x < mu) {
                acc += m;
                mu -= x;
            } else {
                return acc + binomial(m - 1, mu / x);
            }
        }
        if (mu <= 0.0) return acc;
        const double limit = std::exp(-mu);
        double prod = uniform_open();
        std::uint64_t k = 0;
        while (prod > limit) {
            prod *= uniform_open();
            ++k;
        }
        return acc + k;
    }

    // exact: waiting-time method for small means, beta splitting otherwise
    std::uint64_t binomial(std::uint64_t n, double p) {
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (p > 0.5) return n - binomial(n, 1.0 - p);
        if (static_cast<double>(n) * p < 30.0) {
            std::uint64_t k = 0, pos = 0;
            for (;;) {
                const std::uint64_t g = geometric(p);
                if (g >= n - pos) break;
                pos += g + 1;
                ++k;
                if (pos >= n) break;
            }
            return k;
        }
        // the a-th order statistic of n uniforms is Beta(a, n+1-a)
        const std::uint64_t a = 1 + n / 2;
        const std::uint64_t b = n + 1 - a;
        const double x = beta(static_cast<double>(a), static_cast<double>(b));
        if (x >= p) return binomial(a - 1, p / x);
        return a + binomial(b - 1, (p - x) / (1.0 - x));
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t key_;
    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mstlab
