#pragma once

#include <cmath>
#include <cstdint>

namespace tip {

// Hash accumulator for the discrete choices taken while evaluating a
// numeric pipeline: sort permutations, max/min winners, merge-tree branches,
// hard sampling bits. Finite-difference checks evaluate the function at
// nudged inputs and compare decision hashes; a coordinate whose nudge flips
// any discrete choice sits on a subgradient boundary and is excluded.
class DecisionRecorder {
  public:
    void feed(std::uint64_t x) {
        h_ ^= x;
        h_ *= 1099511628211ull;
        h_ ^= h_ >> 29;
    }

    std::uint64_t hash() const { return h_; }

    static DecisionRecorder*& active() {
        thread_local DecisionRecorder* slot = nullptr;
        return slot;
    }

  private:
    std::uint64_t h_ = 1469598103934665603ull;
};

// Installs a recorder for the current scope; restores the previous one on
// exit so recorded regions can nest.
class DecisionScope {
  public:
    explicit DecisionScope(DecisionRecorder& rec) : prev_(DecisionRecorder::active()) {
        DecisionRecorder::active() = &rec;
    }
    ~DecisionScope() { DecisionRecorder::active() = prev_; }

    DecisionScope(const DecisionScope&) = delete;
    DecisionScope& operator=(const DecisionScope&) = delete;

  private:
    DecisionRecorder* prev_;
};

inline void record_decision(std::uint64_t x) {
    if (DecisionRecorder* r = DecisionRecorder::active()) r->feed(x);
}

// --- double overloads of the scalar vocabulary shared with tip::ad::Var ---

inline double value_of(double x) { return x; }

inline double constant_like(double /*like*/, double v) { return v; }

inline double smax(double a, double b) {
    bool left = a >= b;
    record_decision(left ? 1 : 0);
    return left ? a : b;
}

inline double smin(double a, double b) {
    bool left = a <= b;
    record_decision(left ? 1 : 0);
    return left ? a : b;
}

inline double sabs(double a) {
    bool nonneg = a >= 0.0;
    record_decision(nonneg ? 1 : 0);
    return nonneg ? a : -a;
}

inline double sigmoid(double x) {
    if (x >= 0.0) {
        double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

inline double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

// Hard value forwarded, soft value only shapes the gradient on the tape
// side. On plain doubles this is just the hard value.
inline double straight_through(double /*soft*/, double hard, bool /*detach*/) { return hard; }

inline double detach(double x) { return x; }

} // namespace tip
