// Copyright 2026 The boxfill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "boxfill/optimal.hpp"

namespace boxfill::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
    const std::string s = trim(text);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
    }
    return v;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <class T, class Field>
Setter num(Field field) {
    return [field](RunConfig& c, const std::string& v, const std::string& key) {
        field(c) = parse_number<T>(v, key);
    };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> s{
        {"params",
         {
             {"alpha", num<double>([](RunConfig& c) -> double& { return c.params.alpha; })},
             {"beta", num<double>([](RunConfig& c) -> double& { return c.params.beta; })},
             {"gamma", num<double>([](RunConfig& c) -> double& { return c.params.gamma; })},
             {"epsilon", num<double>([](RunConfig& c) -> double& { return c.params.epsilon; })},
         }},
        {"sim",
         {
             {"rel_tol", num<double>([](RunConfig& c) -> double& { return c.sim.rel_tol; })},
             {"abs_tol", num<double>([](RunConfig& c) -> double& { return c.sim.abs_tol; })},
             {"max_step", num<double>([](RunConfig& c) -> double& { return c.sim.max_step; })},
             {"y_stop", num<double>([](RunConfig& c) -> double& { return c.sim.y_stop; })},
             {"t_max", num<double>([](RunConfig& c) -> double& { return c.sim.t_max; })},
             {"output_dt", num<double>([](RunConfig& c) -> double& { return c.sim.output_dt; })},
         }},
        {"run",
         {
             {"horizon", num<double>([](RunConfig& c) -> double& { return c.horizon; })},
             {"output_dir", [](RunConfig& c, const std::string& v, const std::string&) { c.output_dir = trim(v); }},
             {"policy", [](RunConfig& c, const std::string& v, const std::string&) { c.policy = trim(v); }},
             {"release",
              [](RunConfig& c, const std::string& v, const std::string& key) {
                  const std::string s = trim(v);
                  if (s == "when_safe") {
                      c.release = FlattenRelease::when_safe;
                  } else if (s == "at_peak") {
                      c.release = FlattenRelease::at_peak;
                  } else {
                      throw ConfigError("config key '" + key + "': expected when_safe or at_peak");
                  }
              }},
             {"n", num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.n; })},
             {"search_horizon", num<double>([](RunConfig& c) -> double& { return c.search_horizon; })},
             {"strategy",
              [](RunConfig& c, const std::string& v, const std::string&) { c.strategy = parse_strategy(trim(v)); }},
             {"feasibility",
              [](RunConfig& c, const std::string& v, const std::string&) {
                  c.feasibility = parse_feasibility_mode(trim(v));
              }},
             {"restarts", num<std::size_t>([](RunConfig& c) -> std::size_t& { return c.restarts; })},
             {"seed", num<std::uint64_t>([](RunConfig& c) -> std::uint64_t& { return c.seed; })},
             {"feasibility_tol", num<double>([](RunConfig& c) -> double& { return c.feasibility_tol; })},
             {"threads", num<unsigned>([](RunConfig& c) -> unsigned& { return c.threads; })},
         }},
    };
    return s;
}

ControlPolicy read_policy_file(const RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open policy file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t_start,t_end,level") {
        throw ConfigError("policy file '" + path + "': header must be t_start,t_end,level");
    }
    std::vector<Segment> segs;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string a, b, l;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, l)) {
            throw ConfigError("policy file '" + path + "' row " + std::to_string(row) + ": expected 3 fields");
        }
        const std::string where = "policy file row " + std::to_string(row);
        segs.push_back(Segment{parse_number<double>(a, where), parse_number<double>(b, where),
                               Constant{parse_number<double>(l, where)}});
    }
    if (segs.empty()) throw ConfigError("policy file '" + path + "' has no rows");
    const double horizon = cfg.effective_horizon();
    if (segs.back().t_end < horizon) segs.push_back(Segment{segs.back().t_end, horizon, Constant{cfg.params.beta}});
    return ControlPolicy(std::move(segs), "file");
}

} // namespace

void RunConfig::validate() const {
    params.validate();
    sim.validate();
    if (horizon < 0.0) throw ConfigError("config key 'run.horizon' must be >= 0");
    if (n == 0 || n > 32) throw ConfigError("config key 'run.n' must be in [1, 32]");
    if (search_horizon < 0.0) throw ConfigError("config key 'run.search_horizon' must be >= 0");
    if (restarts == 0) throw ConfigError("config key 'run.restarts' must be positive");
    if (!(feasibility_tol >= 0.0)) throw ConfigError("config key 'run.feasibility_tol' must be >= 0");
    if (threads == 0) throw ConfigError("config key 'run.threads' must be positive");
    if (output_dir.empty()) throw ConfigError("config key 'run.output_dir' is empty");
}

RunConfig load_config(const std::string& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config '" + path + "': " + e.message());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        const auto sec = schema().find(section);
        if (sec == schema().end()) throw ConfigError("unknown config section '" + section + "'");
        if (!body.data().empty()) throw ConfigError("config key '" + section + "' must be a section");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            const auto it = sec->second.find(key);
            if (it == sec->second.end()) throw ConfigError("unknown config key '" + full + "'");
            it->second(cfg, value.data(), full);
        }
    }
    cfg.validate();
    return cfg;
}

ControlPolicy resolve_policy(const RunConfig& cfg, const std::string& spec) {
    const double horizon = cfg.effective_horizon();
    if (spec == "laissez_faire") return laissez_faire(cfg.params, horizon);
    if (spec == "flatten_curve") return flatten_curve(cfg.params, horizon, cfg.sim, cfg.release);
    if (spec == "optimal") return build_optimal_policy(cfg.params, cfg.sim, horizon).first;
    if (spec.rfind("constant:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(spec.substr(9));
        std::string p;
        while (std::getline(ss, p, ':')) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError("policy spec '" + spec + "': expected constant:<delta>:<t1>:<t2>");
        return constant_shutdown(cfg.params, parse_number<double>(parts[0], "policy delta"),
                                 parse_number<double>(parts[1], "policy t1"),
                                 parse_number<double>(parts[2], "policy t2"), horizon);
    }
    if (spec.rfind("file:", 0) == 0) return read_policy_file(cfg, spec.substr(5));
    throw ConfigError("unknown policy spec '" + spec + "'");
}

} // namespace boxfill::cli
