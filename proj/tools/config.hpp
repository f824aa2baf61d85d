#pragma once

// JSON config files for the CLI. Schemas are described in samples/README.md.

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "plancherel/localfactors.hpp"
#include "plancherel/pvlimits.hpp"
#include "plancherel/tempered.hpp"

namespace plancherel::cli {

using json = nlohmann::json;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

/// A rational from a number or a "p/q" string.
inline mpq_class rational(const json& j) {
    if (j.is_string()) {
        mpq_class q(j.get<std::string>());
        q.canonicalize();
        return q;
    }
    if (j.is_number_integer())
        return mpq_class(j.get<long>());
    mpq_class q(j.get<double>());
    q.canonicalize();
    return q;
}

/// {"kind": "real", "psi_sign": -1} or {"kind": "padic", "q": 3, "extension": "unramified",
/// "conductor": 0, "eta_epsilon_turn": "1/4"}.
inline local::FieldData field(const json& j) {
    const std::string kind = j.value("kind", "real");
    if (kind == "real")
        return local::FieldData::real(j.value("psi_sign", -1));
    if (kind != "padic")
        throw std::invalid_argument("field kind must be real or padic");
    const std::string ext = j.value("extension", "unramified");
    if (ext != "unramified" && ext != "ramified")
        throw std::invalid_argument("extension must be unramified or ramified");
    auto f = local::FieldData::padic(j.at("q").get<unsigned>(),
                                     ext == "ramified" ? local::Extension::ramified : local::Extension::unramified,
                                     j.value("conductor", 0));
    if (j.contains("eta_epsilon_turn"))
        f.eta_epsilon = local::EpsilonMonomial{local::Root::unit(rational(j["eta_epsilon_turn"])), j.value("eta_epsilon_power", 1)};
    f.validate();
    return f;
}

/// {"base": "E", "weight": 2, "u_re": 0, "u_im": 0.5, "turn": "1/3", "eta": false, "sign": 0}.
inline local::CharData character(const json& j) {
    local::CharData c;
    c.base = j.value("base", "E") == "F" ? local::CharData::Base::F : local::CharData::Base::E;
    c.weight = j.value("weight", 0L);
    c.u_re = j.contains("u_re") ? rational(j["u_re"]) : mpq_class(0);
    c.u_im = j.contains("u_im") ? rational(j["u_im"]) : mpq_class(0);
    c.turn = j.contains("turn") ? rational(j["turn"]) : mpq_class(0);
    c.eta = j.value("eta", false);
    c.sign = j.value("sign", 0);
    return c;
}

inline tempered::HandleKind handle_kind(const std::string& s) {
    if (s == "Ad")
        return tempered::HandleKind::Ad;
    if (s == "As")
        return tempered::HandleKind::As;
    if (s == "cross_dual")
        return tempered::HandleKind::CrossDual;
    if (s == "cross_conj")
        return tempered::HandleKind::CrossConj;
    throw std::invalid_argument("handle kind must be Ad, As, cross_dual or cross_conj");
}

/// A supplied gamma handle: {"tate": <character of F>} or {"induced": <character of E>},
/// optionally times further factors listed in "times".
inline local::GammaFactor gamma_ref(const json& j, const local::FieldData& f) {
    local::GammaFactor g = local::GammaFactor::one(f);
    if (j.contains("tate"))
        g *= local::tate_gamma(character(j["tate"]), f);
    else if (j.contains("induced"))
        g *= local::induced_gamma(character(j["induced"]), f);
    else
        throw std::invalid_argument("gamma reference needs 'tate' or 'induced'");
    if (j.contains("times"))
        for (const auto& t : j["times"])
            g *= gamma_ref(t, f);
    return g;
}

/// {"field": ..., "formal": false, "blocks": [...], "handles": [...]}.
inline tempered::BlockTable block_table(const json& j) {
    tempered::BlockTable t(field(j.value("field", json::object())), j.value("formal", false));
    for (const auto& b : j.at("blocks")) {
        const std::string id = b.at("id");
        std::optional<tempered::AsaiType> type;
        if (b.contains("asai_type"))
            type = tempered::asai_type_from_string(b["asai_type"]);
        if (b.contains("character")) {
            t.add_character(id, character(b["character"]), type);
        } else if (!type) {
            throw std::invalid_argument("block " + id + " needs asai_type or character");
        } else if (*type == tempered::AsaiType::generic) {
            t.add_generic_pair(id, b.at("dual"), b.value("d", 1u));
        } else {
            t.add_self_dual(id, b.value("d", 1u), *type);
        }
    }
    if (j.contains("handles"))
        for (const auto& h : j["handles"])
            t.set_handle({handle_kind(h.at("kind")), h.at("a"), h.value("b", "")}, gamma_ref(h.at("gamma"), t.field()));
    return t;
}

inline std::vector<tempered::Entry> entries(const json& j) {
    std::vector<tempered::Entry> v;
    for (const auto& e : j) {
        if (e.is_string())
            v.push_back({e.get<std::string>(), 0});
        else
            v.push_back({e.at(0).get<std::string>(), e.size() > 1 ? e.at(1).get<double>() : 0.0});
    }
    return v;
}

/// {"entries": [["t", 0.5], "nu"]}
inline tempered::TemperedParamGL gl_param(const json& j) {
    return tempered::TemperedParamGL{entries(j.at("entries")), j.value("eta_twist", false)};
}

/// {"gl": [["t", 0.5]], "anchor": ["nu"]}
inline tempered::TemperedParamU u_param(const json& j) {
    tempered::TemperedParamU s;
    if (j.contains("gl"))
        s.gl = entries(j["gl"]);
    if (j.contains("anchor"))
        s.anchor = j["anchor"].get<std::vector<std::string>>();
    return s;
}

/// {"ps": [[m, n, d]], "qt": [[p, e]], "ru": [[q, f]]}
inline SpectralConfig spectral_config(const json& j) {
    SpectralConfig c;
    if (j.contains("ps"))
        for (const auto& b : j["ps"])
            c.ps.push_back({b.at(0), b.at(1), b.at(2)});
    if (j.contains("qt"))
        for (const auto& b : j["qt"])
            c.qt.push_back({b.at(0), b.at(1)});
    if (j.contains("ru"))
        for (const auto& b : j["ru"])
            c.ru.push_back({b.at(0), b.at(1)});
    c.validate();
    return c;
}

} // namespace plancherel::cli
