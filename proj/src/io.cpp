#include "ietlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ietlab/errors.hpp"
#include "ietlab/fixtures.hpp"

namespace ietlab {

namespace {

std::vector<std::string> labels(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw FormatError(key, std::string("missing array '") + key + "'");
    std::vector<std::string> out;
    for (const auto& e : j[key]) {
        if (!e.is_string()) throw FormatError(key, std::string("labels in '") + key + "' must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

ExactScalar scalar(const Json& e, const std::string& field) {
    try {
        if (e.is_string()) return ExactScalar::parse(e.get<std::string>());
        if (e.is_number_integer()) return ExactScalar(e.get<long>());
    } catch (const std::exception& ex) {
        throw FormatError(field, "bad exact scalar in '" + field + "': " + ex.what());
    }
    throw FormatError(field, "exact scalar '" + field + "' must be a string");
}

std::vector<std::string> labels_of(const Permutation& p, const std::vector<int>& order) {
    std::vector<std::string> out;
    for (int a : order) out.push_back(p.label(a));
    return out;
}

double number(const Json& e, const std::string& field) {
    if (!e.is_number()) throw FormatError(field, "'" + field + "' must be a number");
    return e.get<double>();
}

std::vector<double> per_label(const Json& j, const char* key, const Iet& T) {
    std::vector<double> out(T.size(), 0.0);
    if (!j.contains(key)) return out;
    if (!j[key].is_object()) throw FormatError(key, std::string("'") + key + "' must map labels to numbers");
    for (const auto& [label, v] : j[key].items()) {
        int a = -1;
        try {
            a = T.perm().index_of(label);
        } catch (const DomainError&) {
            throw FormatError(std::string(key) + "." + label, "unknown label '" + label + "'");
        }
        out[static_cast<std::size_t>(a)] = number(v, std::string(key) + "." + label);
    }
    return out;
}

}  // namespace

Iet iet_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("iet", "IET record must be an object");
    const auto top = labels(j, "top");
    const auto bottom = labels(j, "bottom");
    const auto alphabet = j.contains("alphabet") ? labels(j, "alphabet") : top;
    std::vector<int> t, b;
    auto idx = [&](const std::string& s) {
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == s) return static_cast<int>(i);
        throw FormatError("alphabet", "label '" + s + "' missing from alphabet");
    };
    for (const auto& s : top) t.push_back(idx(s));
    for (const auto& s : bottom) b.push_back(idx(s));
    Permutation p(alphabet, t, b);
    if (!j.contains("lengths")) throw FormatError("lengths", "missing 'lengths'");
    const Json& L = j["lengths"];
    std::vector<ExactScalar> lengths(alphabet.size());
    if (L.is_array()) {
        if (L.size() != alphabet.size()) throw FormatError("lengths", "'lengths' must have one entry per letter");
        for (std::size_t i = 0; i < L.size(); ++i) lengths[i] = scalar(L[i], "lengths[" + std::to_string(i) + "]");
    } else if (L.is_object()) {
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
            if (!L.contains(alphabet[i])) throw FormatError("lengths." + alphabet[i], "missing length");
            lengths[i] = scalar(L[alphabet[i]], "lengths." + alphabet[i]);
        }
    } else {
        throw FormatError("lengths", "'lengths' must be a list or an object");
    }
    try {
        return Iet(p, lengths);
    } catch (const DomainError& e) {
        throw FormatError("lengths", e.what());
    }
}

Json iet_to_json(const Iet& T) {
    const Permutation& p = T.perm();
    Json j;
    j["alphabet"] = p.alphabet();
    j["top"] = labels_of(p, p.top());
    j["bottom"] = labels_of(p, p.bottom());
    Json L = Json::object();
    for (std::size_t a = 0; a < T.size(); ++a) L[p.alphabet()[a]] = T.lengths()[a].str();
    j["lengths"] = L;
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path, std::string("malformed JSON: ") + e.what());
    }
}

Iet load_iet(const std::string& source) {
    if (source == "golden") return golden_rotation();
    if (source == "symmetric3") return symmetric_three();
    if (source == "bounded3") return bounded_type_three();
    return iet_from_json(read_json_file(source));
}

RoofSpec roof_from_json(const Json& j, const Iet& T) {
    if (!j.is_object()) throw FormatError("roof", "roof record must be an object");
    RoofSpec s = RoofSpec::constant(T.size(), j.contains("c0") ? number(j["c0"], "c0") : 1.0);
    s.cplus = per_label(j, "Cplus", T);
    s.cminus = per_label(j, "Cminus", T);
    if (j.contains("cutoff")) s.cutoff = number(j["cutoff"], "cutoff");
    try {
        s.validate(T);
    } catch (const std::exception& e) {
        throw FormatError("roof", e.what());
    }
    return s;
}

Json roof_to_json(const RoofSpec& s, const Iet& T) {
    Json j;
    j["c0"] = s.c0;
    Json cp = Json::object(), cm = Json::object();
    for (std::size_t a = 0; a < T.size(); ++a) {
        cp[T.perm().alphabet()[a]] = s.cplus[a];
        cm[T.perm().alphabet()[a]] = s.cminus[a];
    }
    j["Cplus"] = cp;
    j["Cminus"] = cm;
    return j;
}

RoofSpec load_roof(const std::string& source, const Iet& T) {
    if (source == "golden") {
        try {
            return golden_roof(T);
        } catch (const DomainError&) {
            throw FormatError("roof", "builtin roof 'golden' needs a letter A");
        }
    }
    if (source == "constant") return RoofSpec::constant(T.size(), 1.0);
    return roof_from_json(read_json_file(source), T);
}

Json triple_to_json(const ZipperedRectangles& z) {
    Json j;
    Json L = Json::array(), t = Json::array();
    for (const auto& v : z.iet.lengths()) L.push_back(v.str());
    for (const auto& v : z.tau.tau) t.push_back(v.str());
    j["lengths"] = L;
    j["tau"] = t;
    const Permutation& p = z.iet.perm();
    j["permutation"] = {{"alphabet", p.alphabet()}, {"top", labels_of(p, p.top())}, {"bottom", labels_of(p, p.bottom())}};
    return j;
}

ZipperedRectangles triple_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("permutation")) throw FormatError("permutation", "missing 'permutation'");
    Json ij = j["permutation"];
    if (!j.contains("lengths")) throw FormatError("lengths", "missing 'lengths'");
    ij["lengths"] = j["lengths"];
    Iet T = iet_from_json(ij);
    if (!j.contains("tau") || !j["tau"].is_array() || j["tau"].size() != T.size())
        throw FormatError("tau", "'tau' must have one entry per letter");
    SuspensionData tau;
    for (std::size_t i = 0; i < T.size(); ++i) tau.tau.push_back(scalar(j["tau"][i], "tau[" + std::to_string(i) + "]"));
    try {
        return ZipperedRectangles(T, tau);
    } catch (const std::exception& e) {
        throw FormatError("tau", e.what());
    }
}

Json trace_record(const InductionTrace& trace, std::size_t n) {
    Json j;
    j["index"] = n;
    j["type"] = std::string(1, step_char(trace.type(n - 1)));
    Json rows = Json::array();
    const IntMatrix& B = trace.product(n);
    for (std::size_t r = 0; r < B.size(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < B.size(); ++c) row.push_back(B(r, c).get_str());
        rows.push_back(row);
    }
    j["matrix"] = rows;
    j["length"] = trace.interval_length(n).str();
    Json h = Json::array();
    for (const auto& v : trace.heights(n)) h.push_back(v.get_str());
    j["heights"] = h;
    return j;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace ietlab
