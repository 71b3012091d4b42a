#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "homdet/states.hpp"

namespace homdet::optics {

enum class Pol : int { H = 0, V = 1 };

/// One photon's mode: spatial path, linear polarization, orbital angular
/// momentum in units of hbar.
struct ModeLabel {
    std::string path;
    Pol pol = Pol::H;
    int oam = 0;

    auto operator<=>(const ModeLabel&) const = default;
};

/// Sorted multiset of occupied modes; one entry per photon.
using PhotonKey = std::vector<ModeLabel>;

/// Few-photon state as a map from mode multisets to complex amplitudes of the
/// normalized Fock kets (a double occupation's sqrt2 is part of the ket, not
/// the amplitude). Squared norm is 1 for a closed system and equals the
/// branch probability for an unnormalized post-selection branch.
class PhotonicState {
public:
    PhotonicState(std::map<PhotonKey, cxd> terms, std::set<std::string> declared_paths = {});

    static PhotonicState empty_state();

    const std::map<PhotonKey, cxd>& terms() const { return terms_; }
    const std::set<std::string>& paths() const { return paths_; }
    int photon_count() const { return photon_count_; }
    double norm2() const;
    bool empty() const { return terms_.empty(); }

    void declare_path(const std::string& path) { paths_.insert(path); }

private:
    PhotonicState() = default;

    std::map<PhotonKey, cxd> terms_;
    std::set<std::string> paths_;
    int photon_count_ = 0;
};

/// Half-wave plate on one path: H -> cos2t H + sin2t V, V -> sin2t H - cos2t V.
struct Hwp {
    std::string path;
    double angle_deg;
};

/// Polarizing beam splitter: H transmits (keeps its path), V reflects (swaps
/// between the two paths).
struct Pbs {
    std::string path1, path2;
};

/// 50:50 beam splitter: in1 -> (out1 + out2)/sqrt2, in2 -> (out1 - out2)/sqrt2.
struct Bs5050 {
    std::string in1, in2, out1, out2;
};

/// Hologram adding a fixed OAM shift to every photon on one path.
struct Hologram {
    std::string path;
    int oam_shift;
};

/// Ideal detector; marks a post-selection path in circuit descriptions.
struct Detector {
    std::string path;
    std::optional<Pol> filter;
};

using Element = std::variant<Hwp, Pbs, Bs5050, Hologram, Detector>;

/// Applies one unitary element as a single-photon mode substitution extended
/// linearly over the multiset terms, with exact bosonic bookkeeping for
/// multiple occupation. Detector elements are not unitary and are rejected.
PhotonicState apply(const PhotonicState& state, const Element& element);

struct PatternEntry {
    std::string path;
    std::optional<Pol> filter;
};

struct PostSelection {
    PhotonicState conditional; // renormalized; empty_state() when probability 0
    double probability;
};

/// Keeps terms with exactly one photon in each pattern path (matching the
/// polarization filter where given), removes those photons, renormalizes.
PostSelection post_select(const PhotonicState& state,
                          const std::vector<PatternEntry>& pattern);

/// Applies the unitary elements in order, folding any Detector elements into
/// one final post-selection.
PostSelection run_circuit(const PhotonicState& input,
                          const std::vector<Element>& elements);

using NamedElement = std::pair<std::string, Element>;

/// The quantum-joining circuit (preset "quantum-join-fig4"): three photons in
/// paths b1/c/a, thirteen waveplate/PBS steps, then coincidence post-selection
/// on (H_a, H_c) with success probability 1/32.
const std::vector<NamedElement>& fig4_circuit();

inline constexpr const char* kJoinPresetName = "quantum-join-fig4";

struct JoinResult {
    PhotonicState joined;  // single photon over paths b1/b2
    double probability;    // 1/32 up to roundoff
    std::vector<std::pair<std::string, double>> step_norms; // squared norms
};

/// Runs the joining circuit on the two-qubit amplitudes (x0, x1, x2, x3) and
/// post-selects (H_a, H_c). The surviving photon carries
/// x0 H_b1 + x1 V_b1 + x2 H_b2 + x3 V_b2.
JoinResult quantum_join(const Eigen::Vector4cd& x);

struct OamEncodeResult {
    PureState c1; // amplitudes (x0, x1, x2, x3) over basis (H,0),(V,0),(H,q),(V,q)
    PureState c2; // same with the fixed sign pattern (+, +, -, -)
    double probability_per_path; // exactly 1/2
};

/// Hologram(b2, q) followed by the 50:50 merge of b1/b2 into c1/c2. Each
/// output path carries the joined state over the polarization (x) OAM basis;
/// the c2 arm picks up the beam splitter's relative sign on the b2
/// components, recorded as the fixed pattern (+, +, -, -).
OamEncodeResult oam_encode(const PhotonicState& joined, int q);

} // namespace homdet::optics
