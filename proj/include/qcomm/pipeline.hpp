#pragma once

#include <string>

#include "qcomm/closeness.hpp"
#include "qcomm/errors.hpp"
#include "qcomm/hermitian.hpp"
#include "qcomm/walk.hpp"

namespace qcomm {

inline Measure measure_from_name(std::string name) {
  for (auto& ch : name)
    if (ch == '-') ch = '_';
  if (name == "transport") return Measure::kTransport;
  if (name == "fidelity") return Measure::kFidelity;
  if (name == "fidelity_phase_avg") return Measure::kFidelityPhaseAvg;
  if (name == "purity") return Measure::kPurity;
  if (name == "purity_phase_avg") return Measure::kPurityPhaseAvg;
  throw UserError("unknown measure '" + name +
                  "', expected transport, fidelity, fidelity_phase_avg, purity or "
                  "purity_phase_avg");
}

inline RegimeTag regime_from_name(const std::string& name) {
  if (name == "short") return RegimeTag::kShort;
  if (name == "finite") return RegimeTag::kFinite;
  if (name == "infinite") return RegimeTag::kInfinite;
  throw UserError("unknown regime '" + name + "', expected short, finite or infinite");
}

// Single entry point from (measure, regime) to a closeness matrix. The short
// regime exists only for transport; the quadratic expansions of the other
// measures carry no community signal. The finite regime requires t > 0.
inline NodeCloseness compute_closeness(const HermitianMatrix& h, Measure measure,
                                       RegimeTag regime, double t, const PhaseVector& phases,
                                       double degeneracy_tol = 1e-9) {
  if (regime == RegimeTag::kShort) {
    if (measure != Measure::kTransport) {
      throw UserError("the short regime is only defined for the transport measure");
    }
    return closeness_transport_short(h);
  }
  const SpectralDecomposition d = spectral_decompose(h, degeneracy_tol);
  const bool finite = regime == RegimeTag::kFinite;
  switch (measure) {
    case Measure::kTransport:
      return finite ? closeness_transport(d, t) : closeness_transport_infinite(d);
    case Measure::kFidelity:
      return finite ? closeness_fidelity(d, phases, t) : closeness_fidelity_infinite(d, phases);
    case Measure::kFidelityPhaseAvg:
      return finite ? closeness_fidelity_phase_avg(d, t)
                    : closeness_fidelity_phase_avg_infinite(d);
    case Measure::kPurity:
      return finite ? closeness_purity(d, phases, t) : closeness_purity_infinite(d, phases);
    default:
      return finite ? closeness_purity_phase_avg(d, t)
                    : closeness_purity_phase_avg_infinite(d);
  }
}

}  // namespace qcomm
