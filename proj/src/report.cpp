#include "apstruct/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace apstruct {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or(const json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

}  // namespace

std::string json_number(double v) { return finite_or_null(v).dump(); }

json to_json(const SubmanifoldSpec& spec) {
    json radii = json::object();
    switch (spec.family()) {
    case Family::Hypersphere:
        radii["R"] = spec.R();
        break;
    case Family::DoubleProduct:
        radii["r"] = spec.r();
        radii["r3"] = spec.r3();
        radii["R"] = spec.R();
        break;
    case Family::TripleProduct:
        radii["r1"] = spec.r1();
        radii["r2"] = spec.r2();
        radii["r3"] = spec.r3();
        radii["r"] = spec.r();
        radii["R"] = spec.R();
        break;
    }
    return json{{"family", std::string(to_string(spec.family()))},
                {"p", spec.shape().p},
                {"q", spec.shape().q},
                {"radii", radii}};
}

SubmanifoldSpec spec_from_json(const json& j) {
    RadiiInput in;
    const json& radii = j.at("radii");
    for (auto it = radii.begin(); it != radii.end(); ++it) {
        const double v = it.value().get<double>();
        if (it.key() == "R") in.R = v;
        else if (it.key() == "r") in.r = v;
        else if (it.key() == "r1") in.r1 = v;
        else if (it.key() == "r2") in.r2 = v;
        else if (it.key() == "r3") in.r3 = v;
        else throw ConfigError("unknown radius '" + it.key() + "'");
    }
    const Family family = family_from_string(j.at("family").get<std::string>());
    return SubmanifoldSpec::make(family, Shape{j.at("p").get<int>(), j.at("q").get<int>()}, in);
}

json to_json(const ResidualStat& s) {
    return json{{"max_abs_err", finite_or_null(s.max_abs_err)},
                {"mean_abs_err", finite_or_null(s.mean_abs_err)},
                {"samples", s.samples},
                {"tol", finite_or_null(s.tol)},
                {"pass", s.pass},
                {"asserted", s.asserted}};
}

ResidualStat stat_from_json(const json& j) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    ResidualStat s;
    s.max_abs_err = number_or(j.at("max_abs_err"), nan);
    s.mean_abs_err = number_or(j.at("mean_abs_err"), nan);
    s.samples = j.at("samples").get<std::int64_t>();
    s.tol = number_or(j.at("tol"), kInfTol);
    s.pass = j.at("pass").get<bool>();
    s.asserted = j.at("asserted").get<bool>();
    return s;
}

json to_json(const ResidualReport& r) {
    json entries = json::array();
    for (const auto& [name, stat] : r.entries) {
        json e = to_json(stat);
        e["name"] = name;
        entries.push_back(std::move(e));
    }
    return json{{"metadata",
                 {{"spec", to_json(r.metadata.spec)},
                  {"signs", r.metadata.signs.values()},
                  {"seed", r.metadata.seed},
                  {"n_points", r.metadata.n_points},
                  {"n_vectors", r.metadata.n_vectors}}},
                {"residuals", entries},
                {"pass", r.pass()}};
}

ResidualReport report_from_json(const json& j) {
    ResidualReport r;
    const json& m = j.at("metadata");
    r.metadata.spec = spec_from_json(m.at("spec"));
    r.metadata.signs = SignPattern(m.at("signs").get<std::vector<int>>());
    r.metadata.seed = m.at("seed").get<std::uint64_t>();
    r.metadata.n_points = m.at("n_points").get<int>();
    r.metadata.n_vectors = m.at("n_vectors").get<int>();
    for (const auto& e : j.at("residuals")) {
        r.entries.emplace_back(e.at("name").get<std::string>(), stat_from_json(e));
    }
    return r;
}

std::string to_csv(const ResidualReport& r) {
    std::ostringstream os;
    os << "name,max_abs_err,mean_abs_err,samples,tol,pass,asserted\n";
    for (const auto& [name, s] : r.entries) {
        os << name << ',' << json_number(s.max_abs_err) << ',' << json_number(s.mean_abs_err) << ',' << s.samples
           << ',' << json_number(s.tol) << ',' << (s.pass ? "true" : "false") << ','
           << (s.asserted ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace apstruct
