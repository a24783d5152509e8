#pragma once

#include <stdexcept>
#include <string>

namespace cogra {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Idle decision has zero probability (p_f = p_d = 1).
class ZeroIdleProbability : public Error {
public:
    ZeroIdleProbability() : Error("idle sensing decision has zero probability") {}
};

class NonFiniteIntegrand : public Error {
public:
    NonFiniteIntegrand(double h, double g)
        : Error("integrand is not finite at node (h=" + std::to_string(h) +
                ", g=" + std::to_string(g) + ")"),
          gain_h(h), gain_g(g) {}
    double gain_h;
    double gain_g;
};

/// An iteration cap was reached. Carries the last constraint slacks seen.
class MaxIterations : public Error {
public:
    MaxIterations(const std::string& where, int iterations, double slack_power = 0.0,
                  double slack_interference = 0.0)
        : Error(where + ": no convergence after " + std::to_string(iterations) + " iterations"),
          iterations(iterations), slack_power(slack_power),
          slack_interference(slack_interference) {}
    int iterations;
    double slack_power;
    double slack_interference;
};

/// A multiplier the chosen policy variant needs is missing.
class InvalidVariantParams : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// The minimum-EE constraint cannot be met with equality by any policy of the family.
class NoBinding : public Error {
public:
    explicit NoBinding(double best_ee)
        : Error("minimum EE exceeds the achievable maximum " + std::to_string(best_ee)),
          best_ee(best_ee) {}
    double best_ee;
};

}  // namespace cogra
