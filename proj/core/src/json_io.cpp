#include "homdet/json_io.hpp"

#include <cmath>

namespace homdet::io {

json complex_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

cxd complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError("expected a complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix: expected nested arrays");
    Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
            throw ValidationError("matrix: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

json vector_to_json(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Eigen::VectorXcd vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("vector: expected an array");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j[i]);
    return v;
}

namespace {

std::vector<int> dims_from_json(const json& j) {
    if (!j.contains("dims") || !j["dims"].is_array())
        throw ValidationError("state record: missing dims");
    std::vector<int> dims;
    for (const auto& d : j["dims"]) dims.push_back(d.get<int>());
    return dims;
}

} // namespace

json state_record(const PureState& psi) {
    return json{{"dims", psi.dims()}, {"amplitudes", vector_to_json(psi.amplitudes())}};
}

json state_record(const DensityMatrix& rho) {
    return json{{"dims", rho.dims()}, {"matrix", matrix_to_json(rho.matrix())}};
}

ParsedState parse_state(const json& j) {
    auto dims = dims_from_json(j);
    if (j.contains("amplitudes")) {
        PureState psi(vector_from_json(j["amplitudes"]), dims);
        return ParsedState{psi, DensityMatrix::from_pure(psi)};
    }
    if (j.contains("matrix"))
        return ParsedState{std::nullopt, DensityMatrix(matrix_from_json(j["matrix"]), dims)};
    throw ValidationError("state record: need amplitudes or matrix");
}

Ensemble ensemble_from_state(const ParsedState& s) {
    if (s.pure) return Ensemble({{1.0, *s.pure}});
    return ensemble_of(s.density);
}

json witness_record(const Witness& w) {
    return json{{"dims", w.dims()}, {"matrix", matrix_to_json(w.matrix())}};
}

Witness parse_witness(const json& j) {
    return Witness(matrix_from_json(j.at("matrix")), dims_from_json(j));
}

json report_json(const ApproxWitness& aew) {
    return json{{"p_star", aew.p_star},
                {"lambda_min", aew.source.lambda_min()},
                {"matrix", matrix_to_json(aew.matrix.matrix())}};
}

json decomposition_json(const SeparableDecomposition& d) {
    json terms = json::array();
    for (const auto& t : d.terms)
        terms.push_back(json{{"p", t.weight},
                             {"w_a", matrix_to_json(t.w_a.matrix())},
                             {"w_b", matrix_to_json(t.w_b.matrix())}});
    return json{{"residual", d.residual}, {"terms", std::move(terms)}};
}

json report_json(const SeparableApproxWitness& saew) {
    json out{{"p_star", approximate(saew.source).p_star},
             {"p_s", saew.p_s},
             {"mode", saew.mode == SepMode::exact ? "exact" : "ppt-lower-bound"},
             {"matrix", matrix_to_json(saew.matrix.matrix())}};
    if (saew.decomposition) out["decomposition"] = decomposition_json(*saew.decomposition);
    return out;
}

json report_json(const CoincidenceResult& r) {
    json out{{"p_coincidence", r.p_coincidence}, {"p_bunched", r.p_bunched}};
    if (r.breakdown) {
        json b = json::object();
        for (const auto& [key, p] : *r.breakdown)
            b["c" + std::to_string(key.first) + ",d" + std::to_string(key.second)] = p;
        out["breakdown"] = std::move(b);
    }
    return out;
}

json counts_json(const ExperimentCounts& c) {
    return json{{"n_used", c.n_used},
                {"n_c_upper", c.n_c_upper},
                {"n_c_lower", c.n_c_lower},
                {"n_discarded", c.n_discarded}};
}

json report_json(const DetectionReport& r) {
    return json{{"p_c_hat", r.p_c_hat},
                {"f_ave_hat", r.f_ave_hat},
                {"witness_expectation_hat", r.witness_expectation_hat},
                {"std_error", r.std_error},
                {"n_c_equivalent", r.n_c_equivalent},
                {"threshold_counts", r.threshold_counts},
                {"z_score", r.z_score},
                {"decision", r.decision == Decision::entangled ? "entangled" : "not_detected"}};
}

json element_json(const optics::Element& e) {
    using namespace optics;
    return std::visit(
        [](const auto& el) -> json {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, Hwp>)
                return json{{"kind", "HWP"}, {"path", el.path}, {"angle_deg", el.angle_deg}};
            else if constexpr (std::is_same_v<T, Pbs>)
                return json{{"kind", "PBS"}, {"path1", el.path1}, {"path2", el.path2}};
            else if constexpr (std::is_same_v<T, Bs5050>)
                return json{{"kind", "BS"},
                            {"in1", el.in1},
                            {"in2", el.in2},
                            {"out1", el.out1},
                            {"out2", el.out2}};
            else if constexpr (std::is_same_v<T, Hologram>)
                return json{{"kind", "HOLO"}, {"path", el.path}, {"q", el.oam_shift}};
            else {
                json out{{"kind", "DETECT"}, {"path", el.path}};
                if (el.filter)
                    out["pol"] = *el.filter == Pol::H ? "H" : "V";
                return out;
            }
        },
        e);
}

optics::Element element_from_json(const json& j) {
    using namespace optics;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "HWP")
        return Hwp{j.at("path").get<std::string>(), j.at("angle_deg").get<double>()};
    if (kind == "PBS")
        return Pbs{j.at("path1").get<std::string>(), j.at("path2").get<std::string>()};
    if (kind == "BS")
        return Bs5050{j.at("in1").get<std::string>(), j.at("in2").get<std::string>(),
                      j.at("out1").get<std::string>(), j.at("out2").get<std::string>()};
    if (kind == "HOLO")
        return Hologram{j.at("path").get<std::string>(), j.at("q").get<int>()};
    if (kind == "DETECT") {
        std::optional<Pol> filter;
        if (j.contains("pol"))
            filter = j["pol"].get<std::string>() == "V" ? Pol::V : Pol::H;
        return Detector{j.at("path").get<std::string>(), filter};
    }
    throw ValidationError("circuit element: unknown kind '" + kind + "'");
}

json circuit_json(const std::vector<optics::NamedElement>& circuit) {
    json out = json::array();
    for (const auto& [name, e] : circuit) {
        json rec = element_json(e);
        rec["step"] = name;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<optics::Element> circuit_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("circuit: expected an array of elements");
    std::vector<optics::Element> out;
    for (const auto& rec : j) out.push_back(element_from_json(rec));
    return out;
}

void ensure_finite(const json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>()))
        throw ConsistencyError("refusing to serialize a non-finite number");
    if (j.is_array() || j.is_object())
        for (const auto& item : j) ensure_finite(item);
}

} // namespace homdet::io
