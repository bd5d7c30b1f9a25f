// Command-line front end over the mebo C API.
//
//   mebo gen toy2d|highdim|multiclass --out points.csv [--labels labels.csv] ...
//   mebo fit --points points.csv --gamma 0.1 [...]
//   mebo multifit --points points.csv --fractions 0.3,0.3,0.3 --gamma 0.1 [...]
//   mebo eval --result result.json --labels labels.csv
//   mebo bench --sizes 5000,10000 --dims 50 [...]
//
// Exit codes: 0 success, 1 validation or input errors, 2 I/O errors.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mebo/mebo.h"

namespace {

using json = nlohmann::ordered_json;

struct Failure {
    int exit_code;
    std::string message;
};

void check(mebo_status status) {
    if (status == MEBO_OK) return;
    const int code = status == MEBO_ERR_IO ? 2 : 1;
    throw Failure{code, std::string(mebo_status_string(status)) + ": " + mebo_last_error()};
}

struct DatasetFree {
    void operator()(mebo_dataset* p) const { mebo_dataset_free(p); }
};
struct LabelsFree {
    void operator()(mebo_labels* p) const { mebo_labels_free(p); }
};
struct ResultFree {
    void operator()(mebo_result* p) const { mebo_result_free(p); }
};
struct PeelFree {
    void operator()(mebo_peel_result* p) const { mebo_peel_result_free(p); }
};

using DatasetPtr = std::unique_ptr<mebo_dataset, DatasetFree>;
using LabelsPtr = std::unique_ptr<mebo_labels, LabelsFree>;
using ResultPtr = std::unique_ptr<mebo_result, ResultFree>;
using PeelPtr = std::unique_ptr<mebo_peel_result, PeelFree>;

DatasetPtr load_points(const std::string& path) {
    mebo_dataset* ds = nullptr;
    check(mebo_dataset_read_csv(path.c_str(), &ds));
    return DatasetPtr(ds);
}

LabelsPtr load_labels(const std::string& path) {
    mebo_labels* lb = nullptr;
    check(mebo_labels_read_csv(path.c_str(), &lb));
    return LabelsPtr(lb);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{2, "cannot write " + path};
    out << text;
    if (!out) throw Failure{2, "write failed: " + path};
}

json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{2, "cannot open " + path};
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Failure{1, path + ": " + e.what()};
    }
}

void add_param_flags(CLI::App* cmd, mebo_params& p, bool gamma_required) {
    auto* g = cmd->add_option("--gamma", p.gamma, "Outlier fraction");
    if (gamma_required) g->required();
    cmd->add_option("--epsilon", p.epsilon, "Radius slack; tree height is ceil(2/epsilon)+1")->capture_default_str();
    cmd->add_option("--delta", p.delta, "Coverage slack on the outlier count")->capture_default_str();
    cmd->add_option("--mu", p.mu, "Failure probability budget")->capture_default_str();
    cmd->add_option("--meb-iters", p.meb_iters, "Approximate MEB iterations (0 = ceil(1/epsilon^2))")
        ->capture_default_str();
    cmd->add_option("--forest", p.forest_size, "Number of independently rooted trees")->capture_default_str();
    cmd->add_option("--rounds", p.sequential_rounds, "Sequential re-rooting rounds after the forest")
        ->capture_default_str();
    cmd->add_option("--seed", p.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", p.threads, "Worker threads (results do not depend on it)")->capture_default_str();
}

json echo_params(const mebo_params& p, const mebo_derived& dp) {
    json out;
    out["gamma"] = p.gamma;
    out["epsilon"] = p.epsilon;
    out["delta"] = p.delta;
    out["mu"] = p.mu;
    out["meb_iters"] = dp.meb_iters;
    out["forest"] = p.forest_size;
    out["rounds"] = p.sequential_rounds;
    out["seed"] = p.seed;
    out["height"] = dp.height;
    out["top_k"] = dp.top_k;
    out["sample_size"] = dp.sample_size;
    out["inlier_count"] = dp.inliers;
    return out;
}

json result_body(const mebo_result* r) {
    json out;
    const double* c = mebo_result_center(r);
    out["center"] = std::vector<double>(c, c + mebo_result_dim(r));
    out["radius"] = mebo_result_radius(r);
    const size_t* in = mebo_result_inliers(r);
    out["inliers"] = std::vector<size_t>(in, in + mebo_result_inlier_count(r));
    out["inlier_count"] = mebo_result_inlier_count(r);
    out["score"] = mebo_result_score(r);
    out["candidates"] = mebo_result_candidates(r);
    return out;
}

std::vector<size_t> index_list(const json& arr, const std::string& what) {
    if (!arr.is_array()) throw Failure{1, what + " must be an array"};
    std::vector<size_t> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number_unsigned()) throw Failure{1, what + " must hold nonnegative integers"};
        out.push_back(v.get<size_t>());
    }
    return out;
}

json f1_json(const mebo_f1& s) {
    json out;
    out["precision"] = s.precision;
    out["recall"] = s.recall;
    out["f1"] = s.f1;
    out["empty_prediction"] = s.empty_prediction != 0;
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct GenOptions {
    std::string kind;
    std::string out;
    std::string labels;
    size_t n = 1000;
    size_t d = 2;
    double gamma = 0.1;
    std::vector<double> fractions;
    uint64_t seed = 0;
};

int run_gen(const GenOptions& o) {
    mebo_dataset* ds = nullptr;
    mebo_labels* lb = nullptr;
    if (o.kind == "toy2d") {
        check(mebo_generate_toy2d(o.seed, &ds, &lb));
    } else if (o.kind == "highdim") {
        check(mebo_generate_highdim(o.n, o.d, o.gamma, o.seed, &ds, &lb));
    } else {
        check(mebo_generate_multiclass(o.n, o.d, o.fractions.data(), o.fractions.size(), o.gamma, o.seed, &ds, &lb));
    }
    DatasetPtr points(ds);
    LabelsPtr labels(lb);
    std::string labels_path = o.labels;
    if (labels_path.empty()) {
        const bool csv = o.out.ends_with(".csv");
        labels_path = (csv ? o.out.substr(0, o.out.size() - 4) : o.out) + ".labels.csv";
    }
    check(mebo_dataset_write_csv(points.get(), o.out.c_str()));
    check(mebo_labels_write_csv(labels.get(), labels_path.c_str()));
    return 0;
}

struct FitOptions {
    std::string points;
    std::string out;
    bool timing = false;
    std::vector<double> fractions;
};

int run_fit(const FitOptions& o, const mebo_params& p) {
    check(mebo_params_validate(&p, 0));
    DatasetPtr ds = load_points(o.points);
    mebo_derived dp{};
    check(mebo_derive_params(&p, mebo_dataset_size(ds.get()), &dp));

    mebo_result* raw = nullptr;
    const auto start = std::chrono::steady_clock::now();
    check(mebo_recognize(ds.get(), &p, &raw));
    const auto stop = std::chrono::steady_clock::now();
    ResultPtr r(raw);

    json out = result_body(r.get());
    out["params_echo"] = echo_params(p, dp);
    if (o.timing) out["millis"] = std::chrono::duration<double, std::milli>(stop - start).count();
    write_text(o.out, out.dump(2) + "\n");
    return 0;
}

int run_multifit(const FitOptions& o, const mebo_params& p) {
    check(mebo_params_validate(&p, 1));
    DatasetPtr ds = load_points(o.points);

    mebo_peel_result* raw = nullptr;
    const auto start = std::chrono::steady_clock::now();
    check(mebo_peel(ds.get(), o.fractions.data(), o.fractions.size(), &p, &raw));
    const auto stop = std::chrono::steady_clock::now();
    PeelPtr r(raw);

    json classes = json::array();
    for (size_t j = 0; j < mebo_peel_result_classes(r.get()); ++j) {
        const mebo_result* c = mebo_peel_result_class(r.get(), j);
        json body = result_body(c);
        mebo_derived dp{};
        mebo_result_derived(c, &dp);
        body["height"] = dp.height;
        body["top_k"] = dp.top_k;
        classes.push_back(std::move(body));
    }
    json out;
    out["classes"] = std::move(classes);
    json echo;
    echo["gamma"] = p.gamma;
    echo["fractions"] = o.fractions;
    echo["epsilon"] = p.epsilon;
    echo["delta"] = p.delta;
    echo["mu"] = p.mu;
    echo["meb_iters"] = p.meb_iters;
    echo["forest"] = p.forest_size;
    echo["rounds"] = p.sequential_rounds;
    echo["seed"] = p.seed;
    out["params_echo"] = std::move(echo);
    if (o.timing) out["millis"] = std::chrono::duration<double, std::milli>(stop - start).count();
    write_text(o.out, out.dump(2) + "\n");
    return 0;
}

int run_eval(const std::string& result_path, const std::string& labels_path, const std::string& out_path) {
    const json result = read_json(result_path);
    LabelsPtr labels = load_labels(labels_path);
    const size_t n = mebo_labels_size(labels.get());
    const int32_t* lv = mebo_labels_values(labels.get());

    json out;
    if (result.contains("classes")) {
        std::vector<std::vector<size_t>> sets;
        for (const auto& c : result.at("classes")) sets.push_back(index_list(c.at("inliers"), "class inliers"));
        std::vector<const size_t*> ptrs;
        std::vector<size_t> sizes;
        for (const auto& s : sets) {
            ptrs.push_back(s.data());
            sizes.push_back(s.size());
        }
        for (const auto& s : sets) {
            for (size_t i : s) {
                if (i >= n) throw Failure{1, "inlier index " + std::to_string(i) + " outside the labels file"};
            }
        }
        std::vector<int32_t> matched(sets.size());
        std::vector<mebo_f1> per(sets.size());
        double avg = 0.0;
        check(mebo_match_classes(ptrs.data(), sizes.data(), sets.size(), labels.get(), matched.data(), per.data(),
                                 &avg));
        json classes = json::array();
        for (size_t j = 0; j < sets.size(); ++j) {
            json c = f1_json(per[j]);
            c["label"] = matched[j];
            classes.push_back(std::move(c));
        }
        out["classes"] = std::move(classes);
        out["average_f1"] = avg;
    } else {
        if (!result.contains("inliers")) throw Failure{1, result_path + ": no inliers field"};
        const auto predicted = index_list(result.at("inliers"), "inliers");
        std::vector<size_t> truth;
        for (size_t i = 0; i < n; ++i) {
            if (lv[i] != 0) truth.push_back(i);
        }
        mebo_f1 s{};
        check(mebo_f1_score(predicted.data(), predicted.size(), truth.data(), truth.size(), n, &s));
        out = f1_json(s);
    }
    write_text(out_path, out.dump(2) + "\n");
    return 0;
}

struct BenchOptions {
    std::vector<size_t> sizes;
    std::vector<size_t> dims;
    size_t repeats = 5;
    double data_gamma = -1.0;
    std::string out;
};

int run_bench(const BenchOptions& o, const mebo_params& p) {
    check(mebo_params_validate(&p, 0));
    if (o.repeats < 1) throw Failure{1, "repeats must be at least 1"};
    const double data_gamma = o.data_gamma > 0.0 ? o.data_gamma : p.gamma;
    struct Cell {
        size_t n, d;
        DatasetPtr points;
        std::vector<double> times;
        size_t candidates = 0;
    };
    std::vector<Cell> cells;
    for (size_t n : o.sizes) {
        for (size_t d : o.dims) {
            mebo_dataset* ds_raw = nullptr;
            mebo_labels* lb_raw = nullptr;
            check(mebo_generate_highdim(n, d, data_gamma, p.seed, &ds_raw, &lb_raw));
            mebo_labels_free(lb_raw);
            cells.push_back({n, d, DatasetPtr(ds_raw), {}, 0});
        }
    }
    auto timed_fit = [&](Cell& c) {
        mebo_result* raw = nullptr;
        const auto start = std::chrono::steady_clock::now();
        check(mebo_recognize(c.points.get(), &p, &raw));
        const auto stop = std::chrono::steady_clock::now();
        ResultPtr r(raw);
        c.candidates = mebo_result_candidates(r.get());
        return std::chrono::duration<double, std::milli>(stop - start).count();
    };
    // One untimed warm-up per cell, then the repeats round-robin over the
    // grid so that a burst of machine load is spread across cells.
    for (auto& c : cells) timed_fit(c);
    for (size_t rep = 0; rep < o.repeats; ++rep) {
        for (auto& c : cells) c.times.push_back(timed_fit(c));
    }
    std::ostringstream csv;
    csv << "n,d,runs,median_ms,min_ms,max_ms,candidates\n";
    for (const auto& c : cells) {
        csv << c.n << ',' << c.d << ',' << c.times.size() << ',' << median(c.times) << ','
            << *std::min_element(c.times.begin(), c.times.end()) << ','
            << *std::max_element(c.times.begin(), c.times.end()) << ',' << c.candidates << '\n';
    }
    write_text(o.out, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outlier recognition by minimum enclosing balls with outliers"};
    app.require_subcommand(1);

    mebo_params params;
    mebo_params_init(&params);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic points CSV and its labels CSV");
    gen_cmd->add_option("kind", gen.kind, "toy2d, highdim or multiclass")
        ->required()
        ->check(CLI::IsMember({"toy2d", "highdim", "multiclass"}));
    gen_cmd->add_option("--out", gen.out, "Points CSV path")->required();
    gen_cmd->add_option("--labels", gen.labels, "Labels CSV path (default: <out minus .csv>.labels.csv)");
    gen_cmd->add_option("--n", gen.n, "Point count")->capture_default_str();
    gen_cmd->add_option("--d", gen.d, "Dimension")->capture_default_str();
    gen_cmd->add_option("--gamma", gen.gamma, "Outlier fraction")->capture_default_str();
    gen_cmd->add_option("--fractions", gen.fractions, "Per-class fractions (multiclass)")->delimiter(',');
    gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit one ball with outliers and print the result JSON");
    fit_cmd->add_option("--points", fit.points, "Points CSV")->required();
    fit_cmd->add_option("--out", fit.out, "Result JSON path (default: stdout)");
    fit_cmd->add_flag("--timing", fit.timing, "Include wall-clock milliseconds in the JSON");
    add_param_flags(fit_cmd, params, true);

    FitOptions multi;
    auto* multi_cmd = app.add_subcommand("multifit", "Peel one ball per inlier class");
    multi_cmd->add_option("--points", multi.points, "Points CSV")->required();
    multi_cmd->add_option("--fractions", multi.fractions, "Per-class inlier fractions")->required()->delimiter(',');
    multi_cmd->add_option("--out", multi.out, "Result JSON path (default: stdout)");
    multi_cmd->add_flag("--timing", multi.timing, "Include wall-clock milliseconds in the JSON");
    add_param_flags(multi_cmd, params, true);

    std::string eval_result, eval_labels, eval_out;
    auto* eval_cmd = app.add_subcommand("eval", "Score a fit or multifit result against labels");
    eval_cmd->add_option("--result", eval_result, "Result JSON")->required();
    eval_cmd->add_option("--labels", eval_labels, "Labels CSV")->required();
    eval_cmd->add_option("--out", eval_out, "Metrics JSON path (default: stdout)");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time fits over a grid of generated (n, d) instances");
    bench_cmd->add_option("--sizes", bench.sizes, "Point counts")->required()->delimiter(',');
    bench_cmd->add_option("--dims", bench.dims, "Dimensions")->required()->delimiter(',');
    bench_cmd->add_option("--repeats", bench.repeats, "Timed runs per grid cell")->capture_default_str();
    bench_cmd->add_option("--data-gamma", bench.data_gamma, "Outlier fraction of the generated data (default: --gamma)");
    bench_cmd->add_option("--out", bench.out, "Timing CSV path (default: stdout)");
    add_param_flags(bench_cmd, params, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*fit_cmd) return run_fit(fit, params);
        if (*multi_cmd) return run_multifit(multi, params);
        if (*eval_cmd) return run_eval(eval_result, eval_labels, eval_out);
        if (*bench_cmd) return run_bench(bench, params);
    } catch (const Failure& f) {
        std::cerr << "mebo: " << f.message << '\n';
        return f.exit_code;
    } catch (const json::exception& e) {
        std::cerr << "mebo: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
