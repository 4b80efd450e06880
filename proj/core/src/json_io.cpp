#include "prw/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace prw {

using nlohmann::json;

namespace {

json pmf_to_j(const LatticePMF& pmf) {
    return json{{"offset", pmf.lo()}, {"masses", pmf.masses()}, {"defect", pmf.defect()}};
}

LatticePMF pmf_from_j(const json& j) {
    if (!j.is_object() || !j.contains("masses"))
        throw Error("pmf_from_json: expected {offset, masses, defect}");
    return LatticePMF(j.value("offset", std::int64_t{0}),
                      j.at("masses").get<std::vector<double>>(), j.value("defect", 0.0));
}

json drrw_to_j(const DRRWSpec& d) {
    return json{{"drrw",
                 {{"nu_h", pmf_to_j(d.nu_h)},
                  {"nu_v", pmf_to_j(d.nu_v)},
                  {"p_h", d.p_h},
                  {"p_v", d.p_v}}}};
}

DRRWSpec drrw_from_j(const json& j) {
    DRRWSpec d;
    d.nu_h = pmf_from_j(j.at("nu_h"));
    d.nu_v = pmf_from_j(j.at("nu_v"));
    d.p_h = j.value("p_h", 1.0 / 3.0);
    d.p_v = j.value("p_v", 1.0 / 3.0);
    d.validate();
    return d;
}

json quadcomb_to_j(const QuadCombSpec& q) {
    json alpha = json::object(), turn = json::object();
    for (int c = 0; c < kNumConfigs; ++c) {
        std::string name = config_name(config_from_index(c));
        alpha[name] = q.alpha[static_cast<std::size_t>(c)];
        turn[name] = q.turn[static_cast<std::size_t>(c)];
    }
    return json{{"quadcomb",
                 {{"n_max", q.n_max},
                  {"tail", q.tail == TailRule::Const ? "const" : "absorb"},
                  {"alpha", alpha},
                  {"turn", turn}}}};
}

QuadCombSpec quadcomb_from_j(const json& j) {
    QuadCombSpec q;
    q.n_max = j.at("n_max").get<int>();
    std::string tail = j.value("tail", "absorb");
    if (tail == "const") q.tail = TailRule::Const;
    else if (tail == "absorb") q.tail = TailRule::Absorb;
    else throw Error("model_from_json: tail must be 'const' or 'absorb', got '" + tail + "'");
    for (int c = 0; c < kNumConfigs; ++c) {
        std::string name = config_name(config_from_index(c));
        q.alpha[static_cast<std::size_t>(c)] =
            j.at("alpha").at(name).get<std::vector<double>>();
        auto rows = j.at("turn").at(name).get<std::array<std::vector<double>, 3>>();
        q.turn[static_cast<std::size_t>(c)] = rows;
    }
    q.validate();
    return q;
}

// JSON has no infinity literal; the dumper emits null, mapped back to +inf
// (the only non-finite value the sequence structure produces)
double num_or_inf(const json& j, const char* key, double def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    return v.get<double>();
}

} // namespace

std::string pmf_to_json(const LatticePMF& pmf) { return pmf_to_j(pmf).dump(2); }

LatticePMF pmf_from_json(const std::string& text) {
    return pmf_from_j(json::parse(text));
}

std::string model_to_json(const ModelSpec& model) {
    if (std::holds_alternative<DRRWSpec>(model))
        return drrw_to_j(std::get<DRRWSpec>(model)).dump(2);
    return quadcomb_to_j(std::get<QuadCombSpec>(model)).dump(2);
}

ModelSpec model_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.contains("drrw")) return drrw_from_j(j.at("drrw"));
    if (j.contains("quadcomb")) return quadcomb_from_j(j.at("quadcomb"));
    throw Error("model_from_json: expected a top-level 'drrw' or 'quadcomb' field");
}

QuadCombSpec as_quadcomb(const ModelSpec& model) {
    if (std::holds_alternative<QuadCombSpec>(model)) return std::get<QuadCombSpec>(model);
    const DRRWSpec& d = std::get<DRRWSpec>(model);
    int n_max = static_cast<int>(std::max(d.nu_h.hi(), d.nu_v.hi()));
    return drrw_to_quadcomb(d, n_max);
}

std::string cex_params_to_json(const CexParams& p) {
    json j{{"r", p.r},
           {"delta", p.delta},
           {"c", p.c},
           {"alpha", p.alpha},
           {"beta", p.beta},
           {"p2", p.p2},
           {"y1", p.y1},
           {"l1", p.l1},
           {"v_coeff", p.v_coeff},
           {"u_coeff", p.u_coeff},
           {"u_pow", p.u_pow}};
    return j.dump(2);
}

CexParams cex_params_from_json(const std::string& text) {
    json j = json::parse(text);
    CexParams d;
    CexParams p;
    p.r = j.value("r", d.r);
    p.delta = j.value("delta", d.delta);
    p.c = j.value("c", d.c);
    p.alpha = j.value("alpha", d.alpha);
    p.beta = j.value("beta", d.beta);
    p.p2 = j.value("p2", d.p2);
    p.y1 = j.value("y1", d.y1);
    p.l1 = j.value("l1", d.l1);
    p.v_coeff = j.value("v_coeff", d.v_coeff);
    p.u_coeff = j.value("u_coeff", d.u_coeff);
    p.u_pow = j.value("u_pow", d.u_pow);
    p.validate();
    return p;
}

std::string cex_sequence_to_json(const CexSequence& seq) {
    json levels = json::array();
    for (const CexLevel& lv : seq.levels) {
        levels.push_back(json{{"y", lv.y.str()},
                              {"l", lv.l.str()},
                              {"p", lv.p.str()},
                              {"q", lv.q.str()},
                              {"numeric", lv.numeric},
                              {"a", lv.a},
                              {"lna", lv.lna},
                              {"a_cert", lv.a_cert},
                              {"ry", lv.ry},
                              {"rl", lv.rl},
                              {"vr", lv.vr},
                              {"doublings", lv.doublings}});
    }
    json j{{"params", json::parse(cex_params_to_json(seq.params))},
           {"K", seq.K},
           {"levels", levels},
           {"p_next", seq.p_next.str()}};
    return j.dump(2);
}

CexSequence cex_sequence_from_json(const std::string& text) {
    json j = json::parse(text);
    CexSequence seq;
    seq.params = cex_params_from_json(j.at("params").dump());
    seq.K = j.at("K").get<int>();
    for (const json& l : j.at("levels")) {
        CexLevel lv;
        lv.y = LogReal::parse(l.at("y").get<std::string>());
        lv.l = LogReal::parse(l.at("l").get<std::string>());
        lv.p = LogReal::parse(l.at("p").get<std::string>());
        lv.q = LogReal::parse(l.at("q").get<std::string>());
        lv.numeric = l.value("numeric", false);
        lv.a = num_or_inf(l, "a", 0.0);
        lv.lna = num_or_inf(l, "lna", 0.0);
        lv.a_cert = l.value("a_cert", false);
        lv.ry = l.value("ry", 0.0);
        lv.rl = l.value("rl", 0.0);
        lv.vr = l.value("vr", 0.0);
        lv.doublings = l.value("doublings", 0);
        seq.levels.push_back(lv);
    }
    seq.p_next = LogReal::parse(j.at("p_next").get<std::string>());
    if (static_cast<int>(seq.levels.size()) != seq.K)
        throw Error("cex_sequence_from_json: K does not match levels");
    return seq;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
}

} // namespace prw
