#ifndef CHESHIRE_PROTOCOLS_HPP
#define CHESHIRE_PROTOCOLS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cheshire/pointer_sim.hpp"
#include "cheshire/weak_values.hpp"

// End-to-end measurement protocols on the interferometer scenario.
//
// Every result is a MeasurementRecord whose provenance states how the number
// was obtained: Measured (a pointer was actually coupled to that observable),
// Reconstructed (arithmetic over records from two different setups), or
// Inferred (complement or sum rule). The provenance is deliberately
// impossible to omit.
//
// The single-arm scheme measures only Pi_l Pi_H and Pi_l Pi_V; everything
// else it reports is Reconstructed or Inferred. Inferring the upper-arm
// polarization record through the sum rule arithmetically requires a
// sigma_z record, so kim_infer_arm_u hard-fails without one instead of
// assuming a value.

namespace cheshire::protocols {

enum class ObservableId { PiU, PiL, PiUSz, PiLSz, Sz, PiLPiH, PiLPiV };

// "Pi_u", "Pi_l", "Pi_u_sz", "Pi_l_sz", "sigma_z", "Pi_l_Pi_H", "Pi_l_Pi_V"
std::string to_string(ObservableId id);
ObservableId observable_id_from_string(const std::string& name);

struct Measured {};
struct Reconstructed {
    std::vector<std::string> sources; // >= 2 distinct setup ids
};
struct Inferred {
    std::string rule; // "complement_rule" or "sum_rule"
};
using Provenance = std::variant<Measured, Reconstructed, Inferred>;

// "Measured", "Reconstructed", or "Inferred"
std::string provenance_kind(const Provenance& p);

// nullopt means the value is exact (amplitude-level), not sampled.
using ShotCount = std::optional<std::uint64_t>;

struct MeasurementRecord {
    ObservableId observable_id;
    Complex value;
    double g = 0.0;
    ShotCount shots;
    std::string setup_id;
    Provenance provenance;
};

enum class ProtocolKind { GenuineTwoArm, KimSingleArm };
enum class GateKind { IdealCoupling, PpbsGate };
enum class KimSetting { H, V };
enum class SigmaZLocation { before_entrance, after_exit };

struct Protocol {
    ProtocolKind kind = ProtocolKind::GenuineTwoArm;
    GateKind gate = GateKind::IdealCoupling;
    double g = 0.0;
    ShotCount shots;
};

// Throws PreconditionError unless g > 0 and (when sampled) shots >= 1.
void validate_protocol(const Protocol& p);

// Four pointers coupled to Pi_u, Pi_u sigma_z, Pi_l, Pi_l sigma_z in one
// joint run with a single post-selection; records in that order, all
// Measured, shared setup_id "genuine-joint".
std::vector<MeasurementRecord> genuine_qcc_run(double g);
std::vector<MeasurementRecord> genuine_qcc_run(double g, const qcc::PrePost& pp);

// One pointer on Pi_l Pi_H (setting H) or Pi_l Pi_V (setting V). With
// GateKind::PpbsGate the coupling runs through the certified conditional
// controlled-Z channel: the post-selected amplitudes are scaled by the
// gate's success amplitude, which leaves every conditional expectation
// unchanged and shrinks the retained fraction by its square.
MeasurementRecord kim_run(KimSetting setting, double g, GateKind gate);
MeasurementRecord kim_run(KimSetting setting, double g, GateKind gate, const qcc::PrePost& pp);

// Pi_l = H + V, Pi_l sigma_z = H - V. Inputs must be the two settings at
// equal g through the same gate; outputs carry Reconstructed provenance
// naming both source setups.
std::vector<MeasurementRecord> kim_reconstruct(const MeasurementRecord& rec_h,
                                               const MeasurementRecord& rec_v);

// Pi_u = 1 - <Pi_l>, provenance Inferred(complement_rule).
MeasurementRecord infer_complement(const MeasurementRecord& pi_l_rec);

// Pi_u sigma_z = <sigma_z> - <Pi_l sigma_z>, provenance Inferred(sum_rule).
MeasurementRecord infer_sum_rule(const MeasurementRecord& sz_rec,
                                 const MeasurementRecord& pi_l_sz_rec);

// Full upper-arm inference from reconstructed lower-arm records: returns
// [Pi_u, Pi_u sigma_z]. The sum-rule half requires the sigma_z record and
// throws MissingSigmaZMeasurement when it is absent.
std::vector<MeasurementRecord> kim_infer_arm_u(const std::vector<MeasurementRecord>& recons,
                                               const std::optional<MeasurementRecord>& sz_record);

// Weak sigma_z measurement. after_exit couples I (x) sigma_z directly;
// before_entrance couples sigma_z on the interferometer input polarization,
// transported through the fixed preparation optics (|H> -> |u,+>,
// |V> -> |l,->), and is therefore only defined when the pre-selected state
// is the interferometer's. Both locations give identical statistics there.
MeasurementRecord sigma_z_run(double g, SigmaZLocation location);
MeasurementRecord sigma_z_run(double g, SigmaZLocation location, const qcc::PrePost& pp);

struct DisturbanceResult {
    Complex undisturbed;
    Complex disturbed;
};

// First-order estimate of weak_obs with and without a full-strength
// (g = pi) pointer first coupled to strong_obs in the same run. Requires
// weak strength (0 < g <= 0.01) and a projector strong_obs.
DisturbanceResult strong_disturbance_demo(const Operator& strong_obs, const Operator& weak_obs,
                                          double g);
DisturbanceResult strong_disturbance_demo(const Operator& strong_obs, const Operator& weak_obs,
                                          double g, const qcc::PrePost& pp);

struct EnsembleEfficiency {
    double gate_success; // 1 for IdealCoupling, the certified 1/9 for PpbsGate
    double ps_prob;      // post-selection probability of the protocol's run
    double retained;     // product: fraction of the pre/post ensemble kept
};

EnsembleEfficiency ensemble_efficiency(const Protocol& p);

// Which pointer a sweep reads: the Kim setting selects the single coupled
// observable; the genuine target picks one of the four joint pointers.
struct SweepTarget {
    KimSetting setting = KimSetting::H;
    ObservableId genuine_observable = ObservableId::PiU;
};

// Exact conditional pointer readout for one protocol configuration at
// strength g (the quantity a sweep samples).
pointer::PointerReadout protocol_readout(ProtocolKind kind, GateKind gate,
                                         const SweepTarget& target, double g);

} // namespace cheshire::protocols

#endif
