#include "homdet/optics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace homdet::optics {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

/// sqrt(prod n_m!) over the multiplicities of a sorted key.
double occupation_norm(const PhotonKey& key) {
    double prod = 1.0;
    std::size_t i = 0;
    while (i < key.size()) {
        std::size_t j = i;
        while (j < key.size() && key[j] == key[i]) ++j;
        prod *= factorial(static_cast<int>(j - i));
        i = j;
    }
    return std::sqrt(prod);
}

using Substitution = std::vector<std::pair<ModeLabel, cxd>>;

Substitution identity_sub(const ModeLabel& m) { return {{m, 1.0}}; }

void require_path(const PhotonicState& s, const std::string& p, const char* kind) {
    if (!s.paths().contains(p))
        throw ValidationError(std::string(kind) + ": unknown path '" + p + "'");
}

} // namespace

PhotonicState::PhotonicState(std::map<PhotonKey, cxd> terms,
                             std::set<std::string> declared_paths)
    : paths_(std::move(declared_paths)) {
    if (terms.empty()) throw ValidationError("PhotonicState: no terms");
    photon_count_ = static_cast<int>(terms.begin()->first.size());
    if (photon_count_ == 0) throw ValidationError("PhotonicState: zero photons");
    for (auto& [key, amp] : terms) {
        if (static_cast<int>(key.size()) != photon_count_)
            throw ValidationError("PhotonicState: mixed photon numbers");
        PhotonKey sorted = key;
        std::sort(sorted.begin(), sorted.end());
        terms_[sorted] += amp;
        for (const auto& m : sorted) paths_.insert(m.path);
    }
    std::erase_if(terms_, [](const auto& kv) {
        return std::abs(kv.second) < tol::kAmplitudePrune;
    });
    double n2 = norm2();
    if (n2 <= 0.0) throw ValidationError("PhotonicState: zero norm");
    if (n2 > 1.0 + 1e-9) throw ValidationError("PhotonicState: norm exceeds 1");
}

PhotonicState PhotonicState::empty_state() { return PhotonicState(); }

double PhotonicState::norm2() const {
    double acc = 0.0;
    for (const auto& [key, amp] : terms_) acc += std::norm(amp);
    return acc;
}

namespace {

PhotonicState substitute(const PhotonicState& state,
                         const std::function<Substitution(const ModeLabel&)>& sub,
                         const std::set<std::string>& extra_paths) {
    std::map<PhotonKey, cxd> out;
    for (const auto& [key, amp] : state.terms()) {
        // Work on creation-operator monomial coefficients so that bosonic
        // normalization is exact through multiply-occupied intermediates.
        cxd mono = amp / occupation_norm(key);
        std::vector<Substitution> subs;
        subs.reserve(key.size());
        for (const auto& m : key) subs.push_back(sub(m));

        std::vector<std::size_t> idx(key.size(), 0);
        while (true) {
            PhotonKey labels;
            labels.reserve(key.size());
            cxd coeff = mono;
            for (std::size_t k = 0; k < key.size(); ++k) {
                coeff *= subs[k][idx[k]].second;
                labels.push_back(subs[k][idx[k]].first);
            }
            std::sort(labels.begin(), labels.end());
            out[labels] += coeff;

            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == subs[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    for (auto& [key, mono] : out) mono *= occupation_norm(key);
    std::erase_if(out, [](const auto& kv) {
        return std::abs(kv.second) < tol::kAmplitudePrune;
    });
    std::set<std::string> declared = state.paths();
    declared.insert(extra_paths.begin(), extra_paths.end());
    return PhotonicState(std::move(out), std::move(declared));
}

} // namespace

PhotonicState apply(const PhotonicState& state, const Element& element) {
    return std::visit(
        [&](const auto& e) -> PhotonicState {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Hwp>) {
                require_path(state, e.path, "HWP");
                double t = e.angle_deg * std::numbers::pi / 180.0;
                double c = std::cos(2.0 * t), s = std::sin(2.0 * t);
                return substitute(
                    state,
                    [&](const ModeLabel& m) -> Substitution {
                        if (m.path != e.path) return identity_sub(m);
                        ModeLabel h = m, v = m;
                        h.pol = Pol::H;
                        v.pol = Pol::V;
                        if (m.pol == Pol::H) return {{h, c}, {v, s}};
                        return {{h, s}, {v, -c}};
                    },
                    {});
            } else if constexpr (std::is_same_v<T, Pbs>) {
                require_path(state, e.path1, "PBS");
                require_path(state, e.path2, "PBS");
                if (e.path1 == e.path2) throw ValidationError("PBS: paths must differ");
                return substitute(
                    state,
                    [&](const ModeLabel& m) -> Substitution {
                        if (m.pol != Pol::V) return identity_sub(m);
                        ModeLabel sw = m;
                        if (m.path == e.path1)
                            sw.path = e.path2;
                        else if (m.path == e.path2)
                            sw.path = e.path1;
                        else
                            return identity_sub(m);
                        return {{sw, 1.0}};
                    },
                    {});
            } else if constexpr (std::is_same_v<T, Bs5050>) {
                require_path(state, e.in1, "BS");
                require_path(state, e.in2, "BS");
                if (e.in1 == e.in2 || e.out1 == e.out2)
                    throw ValidationError("BS: input and output paths must differ");
                const double s = 1.0 / std::sqrt(2.0);
                return substitute(
                    state,
                    [&](const ModeLabel& m) -> Substitution {
                        if (m.path != e.in1 && m.path != e.in2) return identity_sub(m);
                        ModeLabel o1 = m, o2 = m;
                        o1.path = e.out1;
                        o2.path = e.out2;
                        double sign = (m.path == e.in1) ? 1.0 : -1.0;
                        return {{o1, s}, {o2, sign * s}};
                    },
                    {e.out1, e.out2});
            } else if constexpr (std::is_same_v<T, Hologram>) {
                require_path(state, e.path, "Hologram");
                return substitute(
                    state,
                    [&](const ModeLabel& m) -> Substitution {
                        if (m.path != e.path) return identity_sub(m);
                        ModeLabel shifted = m;
                        shifted.oam += e.oam_shift;
                        return {{shifted, 1.0}};
                    },
                    {});
            } else {
                static_assert(std::is_same_v<T, Detector>);
                throw ValidationError("apply: Detector is not a unitary element");
            }
        },
        element);
}

PostSelection post_select(const PhotonicState& state,
                          const std::vector<PatternEntry>& pattern) {
    if (pattern.empty()) throw ValidationError("post_select: empty pattern");
    std::set<std::string> pattern_paths;
    for (const auto& p : pattern) {
        require_path(state, p.path, "post_select");
        if (!pattern_paths.insert(p.path).second)
            throw ValidationError("post_select: duplicate pattern path");
    }

    std::map<PhotonKey, cxd> kept;
    double prob = 0.0;
    for (const auto& [key, amp] : state.terms()) {
        bool ok = true;
        for (const auto& p : pattern) {
            int in_path = 0;
            const ModeLabel* hit = nullptr;
            for (const auto& m : key)
                if (m.path == p.path) {
                    ++in_path;
                    hit = &m;
                }
            if (in_path != 1 || (p.filter && hit->pol != *p.filter)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        prob += std::norm(amp);
        PhotonKey rest;
        for (const auto& m : key)
            if (!pattern_paths.contains(m.path)) rest.push_back(m);
        kept[rest] += amp;
    }

    if (prob <= 0.0 || kept.empty())
        return {PhotonicState::empty_state(), 0.0};
    if (kept.begin()->first.empty()) // every photon was consumed by the pattern
        return {PhotonicState::empty_state(), prob};

    double scale = 1.0 / std::sqrt(prob);
    for (auto& [key, amp] : kept) amp *= scale;
    std::set<std::string> declared;
    for (const auto& p : state.paths())
        if (!pattern_paths.contains(p)) declared.insert(p);
    return {PhotonicState(std::move(kept), std::move(declared)), prob};
}

PostSelection run_circuit(const PhotonicState& input,
                          const std::vector<Element>& elements) {
    PhotonicState state = input;
    std::vector<PatternEntry> pattern;
    for (const auto& e : elements) {
        if (const auto* det = std::get_if<Detector>(&e)) {
            pattern.push_back({det->path, det->filter});
        } else {
            state = optics::apply(state, e);
        }
    }
    if (pattern.empty()) return {std::move(state), 1.0};
    return post_select(state, pattern);
}

const std::vector<NamedElement>& fig4_circuit() {
    // Step 7 is the odd plate of the setup, physically a half-wave plate at
    // -22.5 deg. Written as 67.5 deg, the same retarder with its global phase
    // folded in: V_b2 -> (H+V)/sqrt2, which keeps the post-selected b2
    // amplitudes in phase with the b1 ones.
    static const std::vector<NamedElement> circuit = {
        {"HWP_a0", Hwp{"a", 22.5}},
        {"PBS_ac", Pbs{"a", "c"}},
        {"PBS_b1b2", Pbs{"b1", "b2"}},
        {"HWP_a1", Hwp{"a", 22.5}},
        {"HWP_c1", Hwp{"c", 22.5}},
        {"HWP_b1_1", Hwp{"b1", 22.5}},
        {"HWP_b2_1", Hwp{"b2", 67.5}},
        {"PBS_ab1", Pbs{"a", "b1"}},
        {"PBS_cb2", Pbs{"c", "b2"}},
        {"HWP_a2", Hwp{"a", 22.5}},
        {"HWP_c2", Hwp{"c", 22.5}},
        {"HWP_b1_2", Hwp{"b1", 22.5}},
        {"HWP_b2_2", Hwp{"b2", 22.5}},
    };
    return circuit;
}

JoinResult quantum_join(const Eigen::Vector4cd& x) {
    if (std::abs(x.norm() - 1.0) > tol::kStructure)
        throw ValidationError("quantum_join: input amplitudes are not normalized");

    const Pol pol_of[2] = {Pol::H, Pol::V};
    std::map<PhotonKey, cxd> terms;
    for (int i = 0; i < 4; ++i) {
        if (x(i) == cxd(0.0)) continue;
        PhotonKey key = {{"b1", pol_of[i / 2], 0}, {"c", pol_of[i % 2], 0}, {"a", Pol::H, 0}};
        std::sort(key.begin(), key.end());
        terms[key] += x(i);
    }
    PhotonicState state(std::move(terms), {"a", "b1", "b2", "c"});

    JoinResult result{PhotonicState::empty_state(), 0.0, {}};
    for (const auto& [name, element] : fig4_circuit()) {
        state = optics::apply(state, element);
        result.step_norms.emplace_back(name, state.norm2());
    }
    auto selected = post_select(state, {{"a", Pol::H}, {"c", Pol::H}});
    result.joined = std::move(selected.conditional);
    result.probability = selected.probability;
    return result;
}

OamEncodeResult oam_encode(const PhotonicState& joined, int q) {
    if (joined.photon_count() != 1)
        throw ValidationError("oam_encode: input must carry exactly one photon");
    for (const auto& [key, amp] : joined.terms()) {
        const auto& m = key.front();
        if (m.path != "b1" && m.path != "b2")
            throw ValidationError("oam_encode: photon outside paths b1/b2");
        if (m.oam != 0)
            throw ValidationError("oam_encode: input photon already carries OAM");
    }
    if (q == 0)
        throw ValidationError("oam_encode: OAM shift q must be nonzero");

    PhotonicState state = joined;
    state.declare_path("b1");
    state.declare_path("b2");
    state = optics::apply(state, Hologram{"b2", q});
    state = optics::apply(state, Bs5050{"b1", "b2", "c1", "c2"});

    // Basis (H,0), (V,0), (H,q), (V,q) per output path.
    auto extract = [&](const std::string& path) {
        Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
        for (const auto& [key, amp] : state.terms()) {
            const auto& m = key.front();
            if (m.path != path) continue;
            int idx = (m.oam == q ? 2 : 0) + (m.pol == Pol::V ? 1 : 0);
            v(idx) += amp;
        }
        return v;
    };
    Eigen::Vector4cd c1 = extract("c1");
    Eigen::Vector4cd c2 = extract("c2");

    return OamEncodeResult{PureState::normalized(c1, {2, 2}),
                           PureState::normalized(c2, {2, 2}), c1.squaredNorm()};
}

} // namespace homdet::optics
