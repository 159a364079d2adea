#include "signals.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace viscowave::signals {

double smoothstep(double tau) {
    if (tau <= 0.0) return 0.0;
    if (tau >= 1.0) return 1.0;
    return tau * tau * tau * (tau * (6.0 * tau - 15.0) + 10.0);
}

double smoothstep_derivative(double tau) {
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    const double v = tau * (tau - 1.0);
    return 30.0 * v * v;
}

double smoothstep_integral(double tau) {
    if (tau <= 0.0) return 0.0;
    if (tau >= 1.0) return 0.5 + (tau - 1.0);
    const double t4 = tau * tau * tau * tau;
    return t4 * (tau * (tau - 3.0) + 2.5);
}

namespace {

double window_value(const std::array<double, 4>& k, double t) {
    if (t <= k[0] || t >= k[3]) return 0.0;
    if (t < k[1]) return smoothstep((t - k[0]) / (k[1] - k[0]));
    if (t <= k[2]) return 1.0;
    return 1.0 - smoothstep((t - k[2]) / (k[3] - k[2]));
}

double window_derivative(const std::array<double, 4>& k, double t) {
    if (t <= k[0] || t >= k[3]) return 0.0;
    if (t < k[1]) return smoothstep_derivative((t - k[0]) / (k[1] - k[0])) / (k[1] - k[0]);
    if (t <= k[2]) return 0.0;
    return -smoothstep_derivative((t - k[2]) / (k[3] - k[2])) / (k[3] - k[2]);
}

double window_integral(const std::array<double, 4>& k, double t) {
    if (t <= k[0]) return 0.0;
    const double rise = k[1] - k[0], fall = k[3] - k[2];
    if (t <= k[1]) return rise * smoothstep_integral((t - k[0]) / rise);
    double acc = 0.5 * rise;
    if (t <= k[2]) return acc + (t - k[1]);
    acc += k[2] - k[1];
    const double tau = std::min(1.0, (t - k[2]) / fall);
    return acc + fall * (tau - smoothstep_integral(tau));
}

}  // namespace

double Signal::value(double t) const {
    switch (kind) {
        case SignalKind::Zero:
            return 0.0;
        case SignalKind::Window:
            return amplitude * window_value(knots, t);
        case SignalKind::PulseTrain: {
            double v = 0.0;
            for (int i = 0; i < count; ++i) v += window_value(knots, t - i * period);
            return amplitude * v;
        }
    }
    return 0.0;
}

double Signal::derivative(double t) const {
    switch (kind) {
        case SignalKind::Zero:
            return 0.0;
        case SignalKind::Window:
            return amplitude * window_derivative(knots, t);
        case SignalKind::PulseTrain: {
            double v = 0.0;
            for (int i = 0; i < count; ++i) v += window_derivative(knots, t - i * period);
            return amplitude * v;
        }
    }
    return 0.0;
}

double Signal::integral(double t) const {
    switch (kind) {
        case SignalKind::Zero:
            return 0.0;
        case SignalKind::Window:
            return amplitude * window_integral(knots, t);
        case SignalKind::PulseTrain: {
            double v = 0.0;
            for (int i = 0; i < count; ++i) v += window_integral(knots, t - i * period);
            return amplitude * v;
        }
    }
    return 0.0;
}

double Signal::support_end() const {
    switch (kind) {
        case SignalKind::Zero:
            return 0.0;
        case SignalKind::Window:
            return knots[3];
        case SignalKind::PulseTrain:
            return knots[3] + (count - 1) * period;
    }
    return 0.0;
}

void validate(const Signal& s, const std::string& path) {
    if (s.kind == SignalKind::Zero) return;
    for (double k : s.knots)
        if (!std::isfinite(k)) throw ValidationError(path + ".knots: must be finite");
    if (!(s.knots[0] >= 0.0)) throw ValidationError(path + ".knots: first knot must be >= 0 (causal signal)");
    for (int i = 0; i < 3; ++i)
        if (!(s.knots[i] < s.knots[i + 1])) throw ValidationError(path + ".knots: must be strictly increasing");
    if (!std::isfinite(s.amplitude)) throw ValidationError(path + ".amplitude: must be finite");
    if (s.kind == SignalKind::PulseTrain) {
        if (!(s.period > 0.0) || !std::isfinite(s.period)) throw ValidationError(path + ".period: must be > 0");
        if (s.count < 1) throw ValidationError(path + ".count: must be >= 1");
    }
}

Signal zero() { return {}; }

Signal window(double t0, double t1, double t2, double t3, double amplitude) {
    Signal s;
    s.kind = SignalKind::Window;
    s.knots = {t0, t1, t2, t3};
    s.amplitude = amplitude;
    return s;
}

Signal pulse_train(double t0, double t1, double t2, double t3, double period, int count, double amplitude) {
    Signal s = window(t0, t1, t2, t3, amplitude);
    s.kind = SignalKind::PulseTrain;
    s.period = period;
    s.count = count;
    return s;
}

Signal default_dirichlet() { return window(0.5, 1.5, 2.5, 3.5); }
Signal default_neumann() { return window(0.5, 1.5, 35.0, 36.0); }
Signal default_pulse() { return window(0.5, 1.5, 2.0, 3.0); }
Signal default_pulse_train(int count) { return pulse_train(0.5, 1.5, 2.0, 3.0, 2.5, count); }

std::string to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::Zero:
            return "zero";
        case SignalKind::Window:
            return "window";
        case SignalKind::PulseTrain:
            return "pulse_train";
    }
    return "zero";
}

}  // namespace viscowave::signals
