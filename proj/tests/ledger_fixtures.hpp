#pragma once

// Reference states for the quantum-joining evolution, built by expanding
// products of single-photon superpositions by hand, independently of the
// circuit machinery in homdet::optics.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "homdet/optics.hpp"

namespace ledger {

using homdet::cxd;
using homdet::optics::ModeLabel;
using homdet::optics::PhotonKey;
using homdet::optics::PhotonicState;
using homdet::optics::Pol;

inline ModeLabel ml(const std::string& path, Pol pol, int oam = 0) {
    return {path, pol, oam};
}

inline const ModeLabel Ha = ml("a", Pol::H), Va = ml("a", Pol::V);
inline const ModeLabel Hb1 = ml("b1", Pol::H), Vb1 = ml("b1", Pol::V);
inline const ModeLabel Hb2 = ml("b2", Pol::H), Vb2 = ml("b2", Pol::V);
inline const ModeLabel Hc = ml("c", Pol::H), Vc = ml("c", Pol::V);

using SinglePhoton = std::vector<std::pair<ModeLabel, cxd>>;
using TermMap = std::map<PhotonKey, cxd>;

inline double occ_norm(const PhotonKey& key) {
    double prod = 1.0;
    std::size_t i = 0;
    while (i < key.size()) {
        std::size_t j = i;
        int n = 0;
        while (j < key.size() && key[j] == key[i]) ++j, ++n;
        for (int k = 2; k <= n; ++k) prod *= k;
        i = j;
    }
    return std::sqrt(prod);
}

/// Product of three single-photon superpositions, expanded into normalized
/// Fock amplitudes through the creation-operator monomials.
inline TermMap product3(const SinglePhoton& p1, const SinglePhoton& p2,
                        const SinglePhoton& p3, cxd scale) {
    TermMap mono;
    for (const auto& [l1, c1] : p1)
        for (const auto& [l2, c2] : p2)
            for (const auto& [l3, c3] : p3) {
                PhotonKey key = {l1, l2, l3};
                std::sort(key.begin(), key.end());
                mono[key] += scale * c1 * c2 * c3;
            }
    TermMap out;
    for (auto& [key, coeff] : mono) {
        cxd amp = coeff * occ_norm(key);
        if (std::abs(amp) > 1e-15) out[key] = amp;
    }
    return out;
}

inline void accumulate(TermMap& into, const TermMap& from) {
    for (const auto& [key, amp] : from) into[key] += amp;
}

inline double max_diff(const PhotonicState& state, const TermMap& expected) {
    double worst = 0.0;
    TermMap seen = expected;
    for (const auto& [key, amp] : state.terms()) {
        auto it = seen.find(key);
        cxd want = it == seen.end() ? cxd(0.0) : it->second;
        worst = std::max(worst, std::abs(amp - want));
        if (it != seen.end()) seen.erase(it);
    }
    for (const auto& [key, amp] : seen) worst = std::max(worst, std::abs(amp));
    return worst;
}

/// Closed-form state after PBS_{a,b1} (global prefactor 1/4).
inline TermMap expected_after_pbs_ab1(const Eigen::Vector4cd& x) {
    TermMap expected;
    SinglePhoton first01 = {{Hb1, 1.0}, {Va, 1.0}};
    SinglePhoton first23 = {{Hb2, 1.0}, {Vb2, 1.0}};
    SinglePhoton second02 = {{Hc, 1.0}, {Vc, 1.0}};
    SinglePhoton second13 = {{Ha, 1.0}, {Vb1, -1.0}};
    SinglePhoton anc = {{Ha, 1.0}, {Vb1, 1.0}, {Hc, 1.0}, {Vc, -1.0}};
    accumulate(expected, product3(first01, second02, anc, 0.25 * x(0)));
    accumulate(expected, product3(first01, second13, anc, 0.25 * x(1)));
    accumulate(expected, product3(first23, second02, anc, 0.25 * x(2)));
    accumulate(expected, product3(first23, second13, anc, 0.25 * x(3)));
    return expected;
}

/// Closed-form state after PBS_{c,b2} (global prefactor 1/4).
inline TermMap expected_after_pbs_cb2(const Eigen::Vector4cd& x) {
    TermMap expected;
    SinglePhoton first01 = {{Hb1, 1.0}, {Va, 1.0}};
    SinglePhoton first23 = {{Hb2, 1.0}, {Vc, 1.0}};
    SinglePhoton second02 = {{Hc, 1.0}, {Vb2, 1.0}};
    SinglePhoton second13 = {{Ha, 1.0}, {Vb1, -1.0}};
    SinglePhoton anc = {{Ha, 1.0}, {Vb1, 1.0}, {Hc, 1.0}, {Vb2, -1.0}};
    accumulate(expected, product3(first01, second02, anc, 0.25 * x(0)));
    accumulate(expected, product3(first01, second13, anc, 0.25 * x(1)));
    accumulate(expected, product3(first23, second02, anc, 0.25 * x(2)));
    accumulate(expected, product3(first23, second13, anc, 0.25 * x(3)));
    return expected;
}

/// Closed-form state after the final waveplate (global prefactor 1/(8 sqrt2)).
inline TermMap expected_after_final_hwp(const Eigen::Vector4cd& x) {
    TermMap expected;
    const cxd scale = 1.0 / (8.0 * std::sqrt(2.0));
    SinglePhoton first01 = {{Hb1, 1.0}, {Vb1, 1.0}, {Ha, 1.0}, {Va, -1.0}};
    SinglePhoton first23 = {{Hb2, 1.0}, {Vb2, 1.0}, {Hc, 1.0}, {Vc, -1.0}};
    SinglePhoton second02 = {{Hc, 1.0}, {Vc, 1.0}, {Hb2, 1.0}, {Vb2, -1.0}};
    SinglePhoton second13 = {{Ha, 1.0}, {Va, 1.0}, {Hb1, -1.0}, {Vb1, 1.0}};
    SinglePhoton anc = {{Ha, 1.0},  {Va, 1.0}, {Hb1, 1.0}, {Vb1, -1.0},
                        {Hc, 1.0},  {Vc, 1.0}, {Hb2, -1.0}, {Vb2, 1.0}};
    accumulate(expected, product3(first01, second02, anc, scale * x(0)));
    accumulate(expected, product3(first01, second13, anc, scale * x(1)));
    accumulate(expected, product3(first23, second02, anc, scale * x(2)));
    accumulate(expected, product3(first23, second13, anc, scale * x(3)));
    return expected;
}

struct Branch {
    Pol pa, pc;
    std::array<cxd, 4> coeffs; // over (Hb1, Vb1, Hb2, Vb2)
};

/// Post-selection table: each branch carries amplitude 1/(4 sqrt2), so each
/// has probability 1/32.
inline std::vector<Branch> branch_table(const Eigen::Vector4cd& x) {
    return {
        {Pol::H, Pol::H, {x(0), x(1), x(2), x(3)}},
        {Pol::H, Pol::V, {x(0), x(1), x(3), x(2)}},
        {Pol::V, Pol::H, {x(1), x(0), x(2), x(3)}},
        {Pol::V, Pol::V, {x(1), x(0), x(3), x(2)}},
    };
}

inline PhotonicState initial_joining_state(const Eigen::Vector4cd& x) {
    const Pol pol_of[2] = {Pol::H, Pol::V};
    std::map<PhotonKey, cxd> terms;
    for (int i = 0; i < 4; ++i) {
        PhotonKey key = {ml("b1", pol_of[i / 2]), ml("c", pol_of[i % 2]), Ha};
        std::sort(key.begin(), key.end());
        terms[key] += x(i);
    }
    return PhotonicState(std::move(terms), {"a", "b1", "b2", "c"});
}

} // namespace ledger
