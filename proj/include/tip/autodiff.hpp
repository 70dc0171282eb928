#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tip/errors.hpp"
#include "tip/scalar.hpp"

namespace tip::ad {

class Tape;

// Handle into a tape. Copies are cheap; arithmetic on Var records nodes on
// the owning tape and mirrors the double overloads in scalar.hpp, so any
// template written against that vocabulary differentiates unchanged.
class Var {
  public:
    Var() = default;
    Var(Tape* tape, std::int32_t id) : tape_(tape), id_(id) {}

    Tape* tape() const { return tape_; }
    std::int32_t id() const { return id_; }
    bool valid() const { return tape_ != nullptr; }
    double value() const;

  private:
    Tape* tape_ = nullptr;
    std::int32_t id_ = -1;
};

// Append-only record of a computation. Each node keeps at most two parents
// with local partials; parents always precede children, which makes the
// reverse sweep a single backwards pass.
class Tape {
  public:
    Var leaf(double v) { return push(v, -1, 0.0, -1, 0.0); }
    Var constant(double v) { return push(v, -1, 0.0, -1, 0.0); }

    Var push(double v, std::int32_t a, double da, std::int32_t b, double db) {
        assert(a < static_cast<std::int32_t>(nodes_.size()));
        assert(b < static_cast<std::int32_t>(nodes_.size()));
        nodes_.push_back(Node{a, b, da, db});
        vals_.push_back(v);
        return Var(this, static_cast<std::int32_t>(nodes_.size()) - 1);
    }

    double value(std::int32_t id) const { return vals_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return nodes_.size(); }

    void clear() {
        nodes_.clear();
        vals_.clear();
    }

    struct Gradients {
        std::vector<double> adj;
        double at(const Var& v) const { return adj[static_cast<std::size_t>(v.id())]; }
    };

    // Reverse sweep from out. Adjoints of all nodes are returned; each node
    // is visited exactly once since ids are in topological order.
    Gradients backward(const Var& out) const {
        if (out.tape() != this) throw param_error("backward: output lives on a different tape");
        Gradients g;
        g.adj.assign(nodes_.size(), 0.0);
        g.adj[static_cast<std::size_t>(out.id())] = 1.0;
        for (std::int32_t i = out.id(); i >= 0; --i) {
            double a = g.adj[static_cast<std::size_t>(i)];
            if (a == 0.0) continue;
            const Node& n = nodes_[static_cast<std::size_t>(i)];
            if (n.a >= 0) g.adj[static_cast<std::size_t>(n.a)] += a * n.da;
            if (n.b >= 0) g.adj[static_cast<std::size_t>(n.b)] += a * n.db;
        }
        return g;
    }

  private:
    struct Node {
        std::int32_t a;
        std::int32_t b;
        double da;
        double db;
    };

    std::vector<Node> nodes_;
    std::vector<double> vals_;
};

using Gradients = Tape::Gradients;

inline double Var::value() const { return tape_->value(id_); }

inline double value_of(const Var& v) { return v.value(); }

inline Var constant_like(const Var& like, double v) { return like.tape()->constant(v); }

// --- arithmetic ---

inline Var operator+(const Var& a, const Var& b) {
    return a.tape()->push(a.value() + b.value(), a.id(), 1.0, b.id(), 1.0);
}
inline Var operator+(const Var& a, double b) {
    return a.tape()->push(a.value() + b, a.id(), 1.0, -1, 0.0);
}
inline Var operator+(double a, const Var& b) { return b + a; }

inline Var operator-(const Var& a, const Var& b) {
    return a.tape()->push(a.value() - b.value(), a.id(), 1.0, b.id(), -1.0);
}
inline Var operator-(const Var& a, double b) {
    return a.tape()->push(a.value() - b, a.id(), 1.0, -1, 0.0);
}
inline Var operator-(double a, const Var& b) {
    return b.tape()->push(a - b.value(), b.id(), -1.0, -1, 0.0);
}
inline Var operator-(const Var& a) {
    return a.tape()->push(-a.value(), a.id(), -1.0, -1, 0.0);
}

inline Var operator*(const Var& a, const Var& b) {
    return a.tape()->push(a.value() * b.value(), a.id(), b.value(), b.id(), a.value());
}
inline Var operator*(const Var& a, double b) {
    return a.tape()->push(a.value() * b, a.id(), b, -1, 0.0);
}
inline Var operator*(double a, const Var& b) { return b * a; }

inline Var operator/(const Var& a, const Var& b) {
    double bv = b.value();
    return a.tape()->push(a.value() / bv, a.id(), 1.0 / bv, b.id(), -a.value() / (bv * bv));
}
inline Var operator/(const Var& a, double b) {
    return a.tape()->push(a.value() / b, a.id(), 1.0 / b, -1, 0.0);
}
inline Var operator/(double a, const Var& b) {
    double bv = b.value();
    return b.tape()->push(a / bv, b.id(), -a / (bv * bv), -1, 0.0);
}

// --- elementary functions ---

inline Var exp(const Var& x) {
    double e = std::exp(x.value());
    return x.tape()->push(e, x.id(), e, -1, 0.0);
}

inline Var log(const Var& x) {
    double v = x.value();
    if (!(v > 0.0)) throw numeric_error("log: non-positive argument");
    return x.tape()->push(std::log(v), x.id(), 1.0 / v, -1, 0.0);
}

inline Var sqrt(const Var& x) {
    double v = x.value();
    double s = std::sqrt(v);
    double d = v > 0.0 ? 0.5 / s : 0.0;
    return x.tape()->push(s, x.id(), d, -1, 0.0);
}

inline Var tanh(const Var& x) {
    double t = std::tanh(x.value());
    return x.tape()->push(t, x.id(), 1.0 - t * t, -1, 0.0);
}

inline Var sigmoid(const Var& x) {
    double s = tip::sigmoid(x.value());
    return x.tape()->push(s, x.id(), s * (1.0 - s), -1, 0.0);
}

inline Var softplus(const Var& x) {
    return x.tape()->push(tip::softplus(x.value()), x.id(), tip::sigmoid(x.value()), -1, 0.0);
}

// --- branchy pieces; decisions are recorded, subgradient picks the winner ---

inline Var smax(const Var& a, const Var& b) {
    bool left = a.value() >= b.value();
    record_decision(left ? 1 : 0);
    return left ? a : b;
}
inline Var smax(const Var& a, double b) {
    bool left = a.value() >= b;
    record_decision(left ? 1 : 0);
    return left ? a : a.tape()->constant(b);
}
inline Var smax(double a, const Var& b) {
    bool left = a >= b.value();
    record_decision(left ? 1 : 0);
    return left ? b.tape()->constant(a) : b;
}

inline Var smin(const Var& a, const Var& b) {
    bool left = a.value() <= b.value();
    record_decision(left ? 1 : 0);
    return left ? a : b;
}
inline Var smin(const Var& a, double b) {
    bool left = a.value() <= b;
    record_decision(left ? 1 : 0);
    return left ? a : a.tape()->constant(b);
}
inline Var smin(double a, const Var& b) {
    bool left = a <= b.value();
    record_decision(left ? 1 : 0);
    return left ? b.tape()->constant(a) : b;
}

inline Var sabs(const Var& a) {
    bool nonneg = a.value() >= 0.0;
    record_decision(nonneg ? 1 : 0);
    return nonneg ? a : -a;
}

// Forward the hard value, route the gradient through the soft relaxation
// (identity estimator) unless detach is set, in which case the sample is
// treated as a constant.
inline Var straight_through(const Var& soft, double hard, bool detach) {
    return soft.tape()->push(hard, soft.id(), detach ? 0.0 : 1.0, -1, 0.0);
}

inline Var detach(const Var& x) { return x.tape()->constant(x.value()); }

// --- finite-difference validation ---

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    std::size_t excluded = 0;
    std::size_t total = 0;
    std::size_t worst_index = 0;
};

// fn must be callable as fn(span<const double>) -> double and
// fn(span<const Var>) -> Var, evaluating the same pipeline. Central
// differences at +-eps are compared against the tape gradient; coordinates
// whose probes (at +-eps and a wider +-10 eps band) change any recorded
// discrete decision are excluded as subgradient boundaries.
template <class Fn>
GradCheckReport grad_check(Fn&& fn, std::span<const double> params, double eps = 1e-5) {
    if (params.empty()) throw param_error("grad_check: empty parameter vector");
    if (!(eps > 0.0)) throw param_error("grad_check: eps must be positive");

    Tape tape;
    std::vector<Var> leaves;
    leaves.reserve(params.size());
    for (double p : params) leaves.push_back(tape.leaf(p));

    DecisionRecorder base_rec;
    Tape::Gradients grads;
    {
        DecisionScope scope(base_rec);
        Var out = fn(std::span<const Var>(leaves));
        if (!std::isfinite(out.value())) throw numeric_error("grad_check: non-finite output");
        grads = tape.backward(out);
    }
    const std::uint64_t base_hash = base_rec.hash();

    std::vector<double> work(params.begin(), params.end());
    auto probe = [&](std::size_t i, double delta, double& val) {
        double saved = work[i];
        work[i] = saved + delta;
        DecisionRecorder rec;
        {
            DecisionScope scope(rec);
            val = fn(std::span<const double>(work));
        }
        work[i] = saved;
        if (!std::isfinite(val)) throw numeric_error("grad_check: non-finite probe");
        return rec.hash();
    };

    GradCheckReport report;
    report.total = params.size();
    for (std::size_t i = 0; i < params.size(); ++i) {
        double vp, vm, vwide;
        bool stable = probe(i, 10.0 * eps, vwide) == base_hash &&
                      probe(i, -10.0 * eps, vwide) == base_hash &&
                      probe(i, eps, vp) == base_hash && probe(i, -eps, vm) == base_hash;
        if (!stable) {
            ++report.excluded;
            continue;
        }
        double fd = (vp - vm) / (2.0 * eps);
        double g = grads.at(leaves[i]);
        double rel = std::abs(fd - g) / std::max({1.0, std::abs(fd), std::abs(g)});
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_index = i;
        }
        ++report.checked;
    }
    return report;
}

} // namespace tip::ad
