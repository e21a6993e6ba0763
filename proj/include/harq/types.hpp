#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace harq {

/// Coding rate in nats per channel use.
struct Rate {
    double nats_per_use;

    explicit Rate(double r) : nats_per_use(r) {
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("Rate must be positive and finite");
    }
};

/// Blocklength pair (n channel uses, k information nats); R = k/n.
struct BlocklengthSpec {
    int n;
    double k;

    BlocklengthSpec(int n_, double k_) : n(n_), k(k_) {
        if (n < 100)
            throw std::invalid_argument("blocklength n must be >= 100");
        if (!(k > 0.0) || !std::isfinite(k))
            throw std::invalid_argument("information nats k must be positive");
    }

    Rate rate() const { return Rate(k / n); }
};

/// phi = e^R - 1, the Rayleigh outage coefficient of the asymptotic model.
inline double phi(Rate rate) { return std::expm1(rate.nats_per_use); }

enum class OutageKind {
    AsymptoticTaylor,  // phi / rho
    ExactRayleigh,     // 1 - exp(-phi/rho)
    FblClosedForm,     // finite-blocklength closed form
    FblIntegral        // finite-blocklength quadrature
};

struct OutageModel {
    OutageKind kind;
    std::optional<BlocklengthSpec> blocklength;

    static OutageModel asymptotic() { return {OutageKind::AsymptoticTaylor, std::nullopt}; }
    static OutageModel exact_rayleigh() { return {OutageKind::ExactRayleigh, std::nullopt}; }
    static OutageModel fbl_closed(BlocklengthSpec b) { return {OutageKind::FblClosedForm, b}; }
    static OutageModel fbl_integral(BlocklengthSpec b) { return {OutageKind::FblIntegral, b}; }

    void validate() const {
        const bool fbl = kind == OutageKind::FblClosedForm || kind == OutageKind::FblIntegral;
        if (fbl && !blocklength)
            throw std::invalid_argument("finite-blocklength model requires a BlocklengthSpec");
        if (!fbl && blocklength)
            throw std::invalid_argument("asymptotic/exact models carry no BlocklengthSpec");
    }
};

enum class ProtocolKind { ARQ, CCHARQ, IRHARQ };

inline const char* protocol_name(ProtocolKind p) {
    switch (p) {
        case ProtocolKind::ARQ: return "arq";
        case ProtocolKind::CCHARQ: return "cc";
        case ProtocolKind::IRHARQ: return "ir";
    }
    return "?";
}

/// Threshold convention for the IR-HARQ accumulated-information event.
/// PerRoundRate compares against R, ParentRate against M*R.
enum class IrThresholdMode { PerRoundRate, ParentRate };

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace harq
