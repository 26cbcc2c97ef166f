#include "dmcrf/config.hpp"

#include "dmcrf/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>

namespace dmcrf {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!keys.count(key)) throw Error("config: unknown key '" + where + key + "'");
}

const json& object_at(const json& parent, const char* key, const std::string& where) {
    const json& v = parent.at(key);
    if (!v.is_object()) throw Error("config: '" + where + key + "' must be an object");
    return v;
}

ElmConfig read_elm(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error("config: '" + where + "' must be an object");
    reject_unknown(j, where + ".", {"kernel_param", "reg_coeff"});
    ElmConfig c{j.at("kernel_param").get<double>(), j.at("reg_coeff").get<double>()};
    c.validate();
    return c;
}

}  // namespace

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open '" + path.string() + "'");
    AppConfig cfg;
    const auto base = path.parent_path();
    try {
        const json root = json::parse(in);
        if (!root.is_object()) throw Error("config: top level must be an object");
        reject_unknown(root, "", {"dataset", "split", "training", "baseline", "edges", "benchmark", "output"});

        const json& ds = object_at(root, "dataset", "");
        reject_unknown(ds, "dataset.", {"path", "timestamp", "features", "target"});
        cfg.dataset_path = base / ds.at("path").get<std::string>();
        cfg.schema.timestamp = ds.at("timestamp").get<std::string>();
        cfg.schema.features = ds.at("features").get<std::vector<std::string>>();
        cfg.schema.target = ds.at("target").get<std::string>();
        if (cfg.schema.features.empty()) throw Error("config: 'dataset.features' must not be empty");

        if (root.contains("split")) {
            const json& s = object_at(root, "split", "");
            reject_unknown(s, "split.", {"train_fraction", "baseline_folds"});
            if (s.contains("train_fraction")) cfg.train_fraction = s.at("train_fraction").get<double>();
            if (s.contains("baseline_folds")) cfg.baseline_folds = s.at("baseline_folds").get<int>();
            if (cfg.baseline_folds < 1) throw Error("config: 'split.baseline_folds' must be at least 1");
        }
        if (root.contains("training")) {
            const json& t = object_at(root, "training", "");
            reject_unknown(t, "training.",
                           {"learning_rate", "max_iters", "rel_tol", "init_alpha", "init_edge_weight"});
            auto& tc = cfg.training;
            tc.learning_rate = t.value("learning_rate", tc.learning_rate);
            tc.max_iters = t.value("max_iters", tc.max_iters);
            tc.rel_tol = t.value("rel_tol", tc.rel_tol);
            tc.init_alpha = t.value("init_alpha", tc.init_alpha);
            tc.init_edge_weight = t.value("init_edge_weight", tc.init_edge_weight);
            tc.validate();
        }
        if (root.contains("baseline")) cfg.baseline = read_elm(root.at("baseline"), "baseline");
        if (root.contains("edges")) {
            cfg.edges.clear();
            for (const auto& e : root.at("edges")) cfg.edges.push_back(parse_edge(e.get<std::string>()));
            if (cfg.edges.empty()) throw Error("config: 'edges' must not be empty");
        }
        if (root.contains("benchmark")) {
            const json& b = object_at(root, "benchmark", "");
            reject_unknown(b, "benchmark.", {"scenarios", "grid", "jobs"});
            if (b.contains("scenarios") && b.contains("grid"))
                throw Error("config: give either 'benchmark.scenarios' or 'benchmark.grid', not both");
            if (b.contains("scenarios")) {
                const auto full = scenario_grid();
                cfg.grid.clear();
                for (const auto& idx : b.at("scenarios")) {
                    const int i = idx.get<int>();
                    if (i < 1 || i > static_cast<int>(full.size()))
                        throw Error("config: scenario index " + std::to_string(i) + " is outside 1.." +
                                    std::to_string(full.size()));
                    cfg.grid.push_back(full[static_cast<std::size_t>(i - 1)]);
                }
            }
            if (b.contains("grid")) {
                cfg.grid.clear();
                for (const auto& g : b.at("grid")) cfg.grid.push_back(read_elm(g, "benchmark.grid[]"));
            }
            if (b.contains("jobs")) cfg.jobs = b.at("jobs").get<unsigned>();
        }
        if (root.contains("output")) {
            const json& o = object_at(root, "output", "");
            reject_unknown(o, "output.", {"dir"});
            cfg.output_dir = base / o.at("dir").get<std::string>();
        } else {
            cfg.output_dir = base / cfg.output_dir;
        }
    } catch (const json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
    return cfg;
}

}  // namespace dmcrf
