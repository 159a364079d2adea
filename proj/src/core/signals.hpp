#pragma once

#include <array>
#include <string>

namespace viscowave::signals {

enum class SignalKind { Zero, Window, PulseTrain };

/// Piecewise window: 0 up to knots[0], quintic rise to `amplitude` on
/// [knots[0], knots[1]], plateau, quintic fall on [knots[2], knots[3]], 0 after.
/// PulseTrain repeats the window `count` times with the given period.
struct Signal {
    SignalKind kind = SignalKind::Zero;
    std::array<double, 4> knots{0.0, 0.0, 0.0, 0.0};
    double amplitude = 1.0;
    double period = 0.0;
    int count = 1;

    double value(double t) const;
    double derivative(double t) const;
    /// Exact antiderivative from 0.
    double integral(double t) const;
    /// Last time at which the signal can be nonzero (0 for Zero).
    double support_end() const;
};

/// Throws ValidationError mentioning `path`.
void validate(const Signal& signal, const std::string& path);

double smoothstep(double tau);
double smoothstep_integral(double tau);
double smoothstep_derivative(double tau);

Signal zero();
Signal window(double t0, double t1, double t2, double t3, double amplitude = 1.0);
Signal pulse_train(double t0, double t1, double t2, double t3, double period, int count, double amplitude = 1.0);

/// Dirichlet window with knots 0.5, 1.5, 2.5, 3.5.
Signal default_dirichlet();
/// Traction with a long plateau: knots 0.5, 1.5, 35, 36.
Signal default_neumann();
/// Single smooth pulse, one time unit per transition: 0.5, 1.5, 2, 3.
Signal default_pulse();
/// default_pulse repeated with period 2.5.
Signal default_pulse_train(int count = 16);

std::string to_string(SignalKind kind);

}  // namespace viscowave::signals
