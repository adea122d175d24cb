#include "sl3/model_io.hpp"

#include <algorithm>

#include <json.hpp>

#include "sl3/errors.hpp"

namespace sl3 {

namespace {

using json = nlohmann::json;

Real num(const json& v, prec_t p, const char* what) {
    if (v.is_number()) return Real::parse(v.dump(), p);
    if (v.is_string()) {
        try {
            return Real::parse(v.get<std::string>(), p);
        } catch (const std::exception&) {
        }
    }
    throw DomainError(std::string("model: bad number in ") + what);
}

long integer(const json& v, const char* what) {
    if (v.is_number_integer()) return v.get<long>();
    throw DomainError(std::string("model: expected an integer in ") + what);
}

const json& row(const json& r, size_t n, const char* what) {
    if (!r.is_array() || r.size() != n)
        throw DomainError(std::string("model: each ") + what + " entry needs " + std::to_string(n) + " fields");
    return r;
}

WeylElement weyl(const json& v) {
    if (v.is_number_integer()) {
        long i = v.get<long>();
        if (i < 0 || i > 5) throw DomainError("model: Weyl index must be 0..5");
        return WeylElement::all()[i];
    }
    if (v.is_string()) return WeylElement::from_name(v.get<std::string>());
    throw DomainError("model: bad Weyl element");
}

std::string s(const Real& r, int digits) { return r.str(digits); }

}  // namespace

CoefficientModel model_from_json(const std::string& text, prec_t p) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("model: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("model: top level must be an object");
    if (!j.contains("lambda") || !j["lambda"].is_array() || j["lambda"].size() != 3)
        throw DomainError("model: \"lambda\" must be an array of three entries");
    std::string lam;
    for (size_t i = 0; i < 3; ++i) {
        const json& e = j["lambda"][i];
        std::string t = e.is_string() ? e.get<std::string>() : e.is_number() ? e.dump() : "";
        if (t.empty()) throw DomainError("model: bad lambda entry");
        lam += (i ? "," : "") + t;
    }
    CoefficientModel m(SatakeParameter::parse(lam, p));
    for (const auto& [key, val] : j.items()) {
        static const char* known[] = {"schema", "lambda", "c00", "dk0", "d0l", "ckl", "mklw", "truncation"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw DomainError("model: unknown field \"" + key + "\"");
        if (key != "schema" && key != "lambda" && key != "truncation" && !val.is_array())
            throw DomainError("model: \"" + key + "\" must be an array");
    }
    if (j.contains("c00"))
        for (const auto& r : j["c00"]) {
            row(r, 3, "c00");
            m.set_c00(weyl(r[0]), Complex(num(r[1], p, "c00"), num(r[2], p, "c00")));
        }
    if (j.contains("dk0"))
        for (const auto& r : j["dk0"]) {
            row(r, 4, "dk0");
            m.set_dk0(integer(r[0], "dk0"), static_cast<int>(integer(r[1], "dk0")),
                      Complex(num(r[2], p, "dk0"), num(r[3], p, "dk0")));
        }
    if (j.contains("d0l"))
        for (const auto& r : j["d0l"]) {
            row(r, 4, "d0l");
            m.set_d0l(integer(r[0], "d0l"), static_cast<int>(integer(r[1], "d0l")),
                      Complex(num(r[2], p, "d0l"), num(r[3], p, "d0l")));
        }
    if (j.contains("ckl"))
        for (const auto& r : j["ckl"]) {
            row(r, 4, "ckl");
            m.set_ckl(integer(r[0], "ckl"), integer(r[1], "ckl"), Complex(num(r[2], p, "ckl"), num(r[3], p, "ckl")));
        }
    if (j.contains("mklw"))
        for (const auto& r : j["mklw"]) {
            row(r, 5, "mklw");
            m.set_mklw(integer(r[0], "mklw"), integer(r[1], "mklw"), weyl(r[2]),
                       Complex(num(r[3], p, "mklw"), num(r[4], p, "mklw")));
        }
    if (j.contains("truncation")) {
        const json& t = j["truncation"];
        if (!t.is_object()) throw DomainError("model: \"truncation\" must be an object");
        for (const auto& [key, val] : t.items()) {
            if (key == "k_max")
                m.truncation.k_max = integer(val, "truncation.k_max");
            else if (key == "l_max")
                m.truncation.l_max = integer(val, "truncation.l_max");
            else if (key == "coset_bound")
                m.truncation.coset_bound = num(val, 53, "truncation.coset_bound").to_double();
            else
                throw DomainError("model: unknown truncation field \"" + key + "\"");
        }
        if (m.truncation.k_max < 0 || m.truncation.l_max < 0 || !(m.truncation.coset_bound >= 1))
            throw DomainError("model: truncation needs k_max, l_max >= 0 and coset_bound >= 1");
    }
    return m;
}

std::string model_to_json(const CoefficientModel& m, int digits) {
    json j;
    j["schema"] = "1";
    for (int i = 0; i < 3; ++i) {
        const Complex& l = m.lam()[i];
        std::string t = s(l.re, digits);
        if (!l.im.is_zero()) t += (l.im.sign() < 0 ? "" : "+") + s(l.im, digits) + "i";
        j["lambda"].push_back(t);
    }
    j["c00"] = json::array();
    for (const auto& [w, v] : m.c00()) j["c00"].push_back({w.name(), s(v.re, digits), s(v.im, digits)});
    j["dk0"] = json::array();
    for (const auto& [k, v] : m.dk0()) j["dk0"].push_back({k.first, k.second, s(v.re, digits), s(v.im, digits)});
    j["d0l"] = json::array();
    for (const auto& [k, v] : m.d0l()) j["d0l"].push_back({k.first, k.second, s(v.re, digits), s(v.im, digits)});
    j["ckl"] = json::array();
    for (const auto& [k, v] : m.ckl()) j["ckl"].push_back({k.first, k.second, s(v.re, digits), s(v.im, digits)});
    j["mklw"] = json::array();
    for (const auto& [k, v] : m.mklw())
        j["mklw"].push_back({std::get<0>(k), std::get<1>(k), WeylElement::all()[std::get<2>(k)].name(), s(v.re, digits),
                             s(v.im, digits)});
    j["truncation"] = {{"k_max", m.truncation.k_max},
                       {"l_max", m.truncation.l_max},
                       {"coset_bound", m.truncation.coset_bound}};
    return j.dump(2);
}

}  // namespace sl3
