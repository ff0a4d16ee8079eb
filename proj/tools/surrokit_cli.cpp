// Command-line front end: wires dataset generation, training, evaluation,
// benchmarking, and topology sweeps into reproducible, CSV-emitting runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "surrokit/surrokit.hpp"

namespace fs = std::filesystem;
using namespace surrokit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Resolved-configuration echo: one flat key=value file next to the outputs,
// loadable again through --config.
void write_config_echo(const fs::path& out_dir, const std::string& name,
                       const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream os(out_dir / (name + "_config.txt"));
    if (!os) throw std::runtime_error("cannot write config echo in " + out_dir.string());
    for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

fs::path ensure_out_dir(const std::string& out_dir) {
    fs::path p(out_dir);
    fs::create_directories(p);
    return p;
}

std::string region_validator(const std::string& s) {
    if (s != "newton" && s != "lj") return "region must be 'newton' or 'lj'";
    return {};
}

// Bad topology or activation tokens are usage errors, not runtime failures.
Topology parse_topology_cli(const std::string& text) {
    try {
        return parse_topology(text);
    } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("topology", e.what());
    }
}

ActivationKind parse_activation_cli(const std::string& name) {
    try {
        return parse_activation(name);
    } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("activation", e.what());
    }
}

struct GenOptions {
    std::string region;
    std::size_t n = 20000;
    double train_fraction = 0.97;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    // newton
    double disc_floor = 0.1;
    double x0 = std::numeric_limits<double>::quiet_NaN();  // NaN: draw from [1, 100]
    // lj
    double lj_epsilon = 1.0;
    double lj_sigma = 1.0;
    double r_min = -1.0;  // <0: default 0.9 sigma
    double r_max = -1.0;  // <0: default 1.2 r_cut
};

int run_gen(const GenOptions& opt) {
    const fs::path out = ensure_out_dir(opt.out_dir);
    Dataset raw;
    std::vector<std::pair<std::string, std::string>> echo{
        {"subcommand", "gen"},
        {"region", opt.region},
        {"n", std::to_string(opt.n)},
        {"train_fraction", format_double(opt.train_fraction)},
        {"seed", std::to_string(opt.seed)},
        {"out_dir", opt.out_dir},
    };

    if (opt.region == "newton") {
        NewtonGenConfig cfg;
        cfg.disc_floor = opt.disc_floor;
        if (!std::isnan(opt.x0)) cfg.fixed_x0 = opt.x0;
        const NewtonGenResult r = gen_newton_dataset(opt.n, cfg, opt.seed);
        raw = std::move(r.data);
        std::cout << "generated " << raw.size() << " newton samples (x0 = " << r.x0
                  << ", rejection rate " << r.rejection_rate << ")\n";
        echo.emplace_back("x0", format_double(r.x0));
        echo.emplace_back("disc_floor", format_double(cfg.disc_floor));
        echo.emplace_back("rejection_rate", format_double(r.rejection_rate));
    } else {
        const LJParams params(opt.lj_epsilon, opt.lj_sigma);
        const auto [default_lo, default_hi] = default_lj_r_sq_range(params);
        const double r_sq_min = opt.r_min > 0.0 ? opt.r_min * opt.r_min : default_lo;
        const double r_sq_max = opt.r_max > 0.0 ? opt.r_max * opt.r_max : default_hi;
        raw = gen_lj_dataset(opt.n, params, r_sq_min, r_sq_max, opt.seed);
        std::cout << "generated " << raw.size() << " lj samples (r_sq in [" << r_sq_min << ", "
                  << r_sq_max << "], rejection rate 0)\n";
        echo.emplace_back("lj_epsilon", format_double(params.epsilon_lj));
        echo.emplace_back("lj_sigma", format_double(params.sigma));
        echo.emplace_back("r_cut", format_double(params.r_cut));
        echo.emplace_back("r_sq_min", format_double(r_sq_min));
        echo.emplace_back("r_sq_max", format_double(r_sq_max));
    }

    const SplitResult sr = split(raw, opt.train_fraction, derive_seed(opt.seed, 0x5b117));
    const fs::path train_path = out / (opt.region + "_train.csv");
    const fs::path val_path = out / (opt.region + "_val.csv");
    write_dataset(sr.train, train_path.string());
    write_dataset(sr.validation, val_path.string());
    std::cout << "train split: " << sr.train.size() << " -> " << train_path.string() << "\n"
              << "val split:   " << sr.validation.size() << " -> " << val_path.string() << "\n";
    write_config_echo(out, "gen_" + opt.region, echo);
    return kExitOk;
}

struct TrainOptions {
    std::string train_path;
    std::string val_path;
    std::string topology = "3x5x3x1";
    std::string hidden_act = "tanh";
    std::string output_act = "identity";
    double lr = 0.01;
    double momentum = 0.9;
    std::size_t batch = 200;
    std::size_t steps = 5000;
    std::size_t log_every = 100;
    double tolerance = 0.05;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string model_name = "model.txt";
};

int run_train(const TrainOptions& opt) {
    const fs::path out = ensure_out_dir(opt.out_dir);
    const Dataset train_set = read_dataset(opt.train_path);
    const Dataset val_set = read_dataset(opt.val_path);

    Topology topo = parse_topology_cli(opt.topology);
    topo.hidden_activation = parse_activation_cli(opt.hidden_act);
    topo.output_activation = parse_activation_cli(opt.output_act);

    TrainConfig cfg;
    cfg.learning_rate = opt.lr;
    cfg.momentum_coeff = opt.momentum;
    cfg.batch_size = opt.batch;
    cfg.max_steps = opt.steps;
    cfg.log_every = opt.log_every;
    cfg.rng_seed = opt.seed;
    cfg.validate();

    MlpModel model = init_model(topo, derive_seed(opt.seed, 0x171));
    const TrainResult result = train(std::move(model), train_set, val_set, cfg, opt.tolerance);

    const fs::path model_path = out / opt.model_name;
    const fs::path trace_path = out / "trace.csv";
    save_model(result.model, model_path.string());
    write_trace_csv(result.trace, trace_path.string());

    const TraceRow& last = result.trace.rows.back();
    std::cout << "trained " << topo.to_string() << " for " << opt.steps << " steps\n"
              << "final train_l2 " << last.train_l2 << ", val_l2 " << last.val_l2
              << ", val_accuracy " << last.val_accuracy << ", val_abs_err " << last.val_abs_err
              << "\nmodel -> " << model_path.string() << "\ntrace -> " << trace_path.string()
              << "\n";

    write_config_echo(out, "train", {
        {"subcommand", "train"},
        {"train", opt.train_path},
        {"val", opt.val_path},
        {"topology", topo.to_string()},
        {"hidden_act", std::string(activation_name(topo.hidden_activation))},
        {"output_act", std::string(activation_name(topo.output_activation))},
        {"lr", format_double(cfg.learning_rate)},
        {"momentum", format_double(cfg.momentum_coeff)},
        {"batch", std::to_string(cfg.batch_size)},
        {"steps", std::to_string(cfg.max_steps)},
        {"log_every", std::to_string(cfg.log_every)},
        {"tolerance", format_double(opt.tolerance)},
        {"seed", std::to_string(opt.seed)},
        {"out_dir", opt.out_dir},
    });
    return kExitOk;
}

struct EvalOptions {
    std::string model_path;
    std::string data_path;
    double tolerance = 0.05;
    std::string out_dir = "out";
};

int run_eval(const EvalOptions& opt) {
    const fs::path out = ensure_out_dir(opt.out_dir);
    const MlpModel model = load_model(opt.model_path);
    const Dataset data = read_dataset(opt.data_path);
    const Metrics m = eval_metrics(model, data, opt.tolerance);
    std::cout << "samples " << data.size() << "\nl2 " << m.l2 << "\naccuracy " << m.accuracy
              << " (tolerance_rel " << opt.tolerance << ")\nmean_abs_err " << m.mean_abs_err
              << "\n";
    std::ofstream os(out / "metrics.csv");
    os << "l2,accuracy,mean_abs_err,tolerance_rel,n_samples\n"
       << format_double(m.l2) << ',' << format_double(m.accuracy) << ','
       << format_double(m.mean_abs_err) << ',' << format_double(opt.tolerance) << ','
       << data.size() << '\n';
    write_config_echo(out, "eval", {
        {"subcommand", "eval"},
        {"model", opt.model_path},
        {"data", opt.data_path},
        {"tolerance", format_double(opt.tolerance)},
        {"out_dir", opt.out_dir},
    });
    return kExitOk;
}

struct BenchOptions {
    std::string region;
    std::string model_path;
    int reps = 5;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    double tolerance = 0.05;
    // newton
    std::size_t batch_min = 5120;
    std::size_t batch_max = 10240;
    std::size_t batch_step = 512;
    double x0 = 50.0;
    // lj
    std::size_t atoms = 500;
    double density = 0.8;
    double skin = 0.3;
};

Matrix2D sample_newton_inputs(std::size_t n, std::mt19937_64& rng) {
    const CoeffRanges ranges;
    Matrix2D inputs(n, 3);
    std::size_t row = 0;
    while (row < n) {
        const double a = uniform_real(rng, ranges.a_min, ranges.a_max);
        const double b = uniform_real(rng, ranges.b_min, ranges.b_max);
        const double c = uniform_real(rng, ranges.c_min, ranges.c_max);
        if (b * b - 4.0 * a * c < 0.1) continue;
        inputs(row, 0) = a;
        inputs(row, 1) = b;
        inputs(row, 2) = c;
        ++row;
    }
    return inputs;
}

int run_bench(BenchOptions opt) {
    if (opt.reps < 3) {
        std::cerr << "warning: repetitions below 3 clamped to 3\n";
        opt.reps = 3;
    }
    const fs::path out = ensure_out_dir(opt.out_dir);
    const MlpModel model = load_model(opt.model_path);
    std::mt19937_64 rng(derive_seed(opt.seed, 0xbe7c4));

    if (opt.region == "newton") {
        if (opt.batch_min == 0 || opt.batch_max < opt.batch_min || opt.batch_step == 0)
            throw CLI::ValidationError("bench", "invalid batch range");
        const RegionSpec region = make_newton_region(NewtonConfig{1e-10, 100, opt.x0});
        SurrogateBinding binding(region, model, BindingMode::Surrogate);

        std::ofstream os(out / "bench.csv");
        os << "batch,t_original,t_surrogate,speedup,accuracy,mean_abs_err,flops_per_call\n";
        std::cout << "batch  t_original  t_surrogate  speedup  accuracy\n";
        for (std::size_t n = opt.batch_min; n <= opt.batch_max; n += opt.batch_step) {
            const Matrix2D inputs = sample_newton_inputs(n, rng);
            const EvalReport r = bench_region(binding, inputs, opt.reps, opt.tolerance);
            os << n << ',' << format_double(r.t_original) << ',' << format_double(r.t_surrogate)
               << ',' << format_double(r.speedup) << ',' << format_double(r.accuracy) << ','
               << format_double(r.mean_abs_err) << ',' << r.flops_per_call << '\n';
            std::printf("%6zu  %.6f    %.6f     %.3f    %.4f\n", n, r.t_original, r.t_surrogate,
                        r.speedup, r.accuracy);
        }
        std::cout << "bench table -> " << (out / "bench.csv").string() << "\n";
    } else {
        const LJParams params;
        const double box_length =
            std::cbrt(static_cast<double>(opt.atoms) / opt.density);
        AtomBox box;
        box.box_length = box_length;
        box.positions = random_box_positions(opt.atoms, box_length, 0.85 * params.sigma, rng);
        const NeighborListResult nl =
            build_neighbor_lists(box.positions, box_length, params.r_cut, opt.skin);
        box.neighbor_lists = nl.lists;
        if (nl.all_pairs_fallback)
            std::cerr << "warning: box too small for minimum-image lists; using all pairs\n";

        SurrogateBinding binding(make_lj_region(params), model, BindingMode::Surrogate);
        std::vector<Vec3> exact_forces;
        const double t_original = time_median_seconds(
            [&] { exact_forces = lj_force_sweep(box, params); }, opt.reps, &std::cerr);
        std::vector<Vec3> surrogate_forces;
        const double t_surrogate = time_median_seconds(
            [&] {
                LjSurrogatePairEval pair_eval(binding);
                surrogate_forces = lj_force_sweep(box, pair_eval);
            },
            opt.reps, &std::cerr);

        double abs_err = 0.0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < box.size(); ++i) {
            bool hit = true;
            for (int k = 0; k < 3; ++k) {
                const double err = std::fabs(exact_forces[i][k] - surrogate_forces[i][k]);
                abs_err += err;
                if (err > opt.tolerance *
                              std::max(std::fabs(exact_forces[i][k]), kAccuracyTruthFloor))
                    hit = false;
            }
            if (hit) ++hits;
        }
        const double accuracy = static_cast<double>(hits) / static_cast<double>(box.size());
        const double mean_abs_err = abs_err / (3.0 * static_cast<double>(box.size()));
        const double speedup = t_original / t_surrogate;

        std::cout << "atoms " << opt.atoms << ", density " << opt.density << ", box "
                  << box_length << "\n"
                  << "t_original " << t_original << " s, t_surrogate " << t_surrogate
                  << " s, speedup " << speedup << "\n"
                  << "force accuracy " << accuracy << ", mean_abs_err " << mean_abs_err << "\n";
        std::ofstream os(out / "bench.csv");
        os << "atoms,t_original,t_surrogate,speedup,accuracy,mean_abs_err,flops_per_call\n";
        os << opt.atoms << ',' << format_double(t_original) << ',' << format_double(t_surrogate)
           << ',' << format_double(speedup) << ',' << format_double(accuracy) << ','
           << format_double(mean_abs_err) << ',' << forward_flops(model.topology) << '\n';
        std::cout << "bench table -> " << (out / "bench.csv").string() << "\n";
    }

    write_config_echo(out, "bench_" + opt.region, {
        {"subcommand", "bench"},
        {"region", opt.region},
        {"model", opt.model_path},
        {"reps", std::to_string(opt.reps)},
        {"seed", std::to_string(opt.seed)},
        {"tolerance", format_double(opt.tolerance)},
        {"batch_min", std::to_string(opt.batch_min)},
        {"batch_max", std::to_string(opt.batch_max)},
        {"batch_step", std::to_string(opt.batch_step)},
        {"x0", format_double(opt.x0)},
        {"atoms", std::to_string(opt.atoms)},
        {"density", format_double(opt.density)},
        {"skin", format_double(opt.skin)},
        {"out_dir", opt.out_dir},
    });
    return kExitOk;
}

struct SweepOptions {
    std::string region;
    std::string train_path;
    std::string val_path;
    std::vector<std::string> topologies;
    bool topologies_given = false;
    std::string hidden_act;  // empty: region default
    double lr = -1.0;        // <0: region default (per-depth for lj)
    std::size_t steps = 0;   // 0: region default
    std::size_t batch = 200;
    double momentum = 0.9;
    int reps = 5;
    std::size_t bench_n = 4096;
    double tolerance = 0.05;
    std::uint64_t seed = 1;
    double x0 = 50.0;
    std::string out_dir = "out";
};

const std::vector<std::string> kNewtonSweepTopologies = {
    "3x3x1",     "3x5x1",     "3x8x1",       "3x3x2x1",     "3x5x3x1",
    "3x8x5x1",   "3x5x3x2x1", "3x8x5x3x1",   "3x11x8x5x1"};

const std::vector<std::string> kLjSweepTopologies = {
    "1x3x1", "1x5x1", "1x8x1", "1x3x2x1", "1x3x5x1", "1x5x8x1"};

int run_sweep(SweepOptions opt) {
    if (opt.reps < 3) {
        std::cerr << "warning: repetitions below 3 clamped to 3\n";
        opt.reps = 3;
    }
    const fs::path out = ensure_out_dir(opt.out_dir);
    const Dataset train_set = read_dataset(opt.train_path);
    const Dataset val_set = read_dataset(opt.val_path);

    if (opt.topologies_given) {
        std::vector<std::string> cleaned;
        for (const std::string& t : opt.topologies)
            if (!t.empty()) cleaned.push_back(t);
        if (cleaned.empty()) throw CLI::ValidationError("sweep", "empty topology list");
        opt.topologies = std::move(cleaned);
    } else {
        opt.topologies = opt.region == "newton" ? kNewtonSweepTopologies : kLjSweepTopologies;
    }
    if (opt.steps == 0) opt.steps = opt.region == "newton" ? 5000 : 10000;
    const ActivationKind hidden =
        parse_activation_cli(!opt.hidden_act.empty() ? opt.hidden_act
                             : opt.region == "newton" ? "tanh"
                                                      : "relu_tanh");

    std::vector<SweepJob> jobs;
    for (const std::string& topo_str : opt.topologies) {
        SweepJob job;
        job.topology = parse_topology_cli(topo_str);
        job.topology.hidden_activation = hidden;
        job.config.batch_size = opt.batch;
        job.config.momentum_coeff = opt.momentum;
        job.config.max_steps = opt.steps;
        job.config.log_every = 100;
        if (opt.lr > 0.0) {
            job.config.learning_rate = opt.lr;
        } else if (opt.region == "lj") {
            // Three-layer nets train at 0.005, deeper ones at 0.01.
            job.config.learning_rate = job.topology.layer_count() == 3 ? 0.005 : 0.01;
        } else {
            job.config.learning_rate = 0.01;
        }
        jobs.push_back(std::move(job));
    }

    RegionSpec region;
    Matrix2D bench_inputs;
    std::mt19937_64 rng(derive_seed(opt.seed, 0x53eeb));
    if (opt.region == "newton") {
        region = make_newton_region(NewtonConfig{1e-10, 100, opt.x0});
        bench_inputs = sample_newton_inputs(opt.bench_n, rng);
    } else {
        const LJParams params;
        region = make_lj_region(params);
        const auto [lo, hi] = default_lj_r_sq_range(params);
        Dataset probe = gen_lj_dataset(opt.bench_n, params, lo, hi, derive_seed(opt.seed, 0xb));
        bench_inputs = Matrix2D(opt.bench_n, 1);
        for (std::size_t i = 0; i < opt.bench_n; ++i)
            bench_inputs(i, 0) = probe.samples[i].inputs[0];
    }

    const auto entries = sweep_topologies(region, train_set, val_set, jobs, bench_inputs,
                                          opt.seed, opt.reps, opt.tolerance);
    const fs::path csv_path = out / "sweep.csv";
    write_sweep_csv(entries, csv_path.string());

    std::cout << "topology        l2_loss    accuracy  mean_abs_err  speedup\n";
    for (const SweepEntry& e : entries) {
        if (e.failed()) {
            std::cout << e.topology.to_string() << "  FAILED: " << e.error << "\n";
            continue;
        }
        std::printf("%-14s  %.6f   %.4f    %.6f      %.3f\n", e.topology.to_string().c_str(),
                    e.final_l2, e.report.accuracy, e.report.mean_abs_err, e.report.speedup);
        save_model(e.model, (out / ("model_" + e.topology.to_string() + ".txt")).string());
    }
    std::cout << "sweep table -> " << csv_path.string() << "\n";

    std::string topo_list;
    for (const auto& t : opt.topologies) topo_list += (topo_list.empty() ? "" : " ") + t;
    write_config_echo(out, "sweep_" + opt.region, {
        {"subcommand", "sweep"},
        {"region", opt.region},
        {"train", opt.train_path},
        {"val", opt.val_path},
        {"topologies", topo_list},
        {"hidden_act", std::string(activation_name(hidden))},
        {"lr", opt.lr > 0.0 ? format_double(opt.lr) : std::string("per-region default")},
        {"steps", std::to_string(opt.steps)},
        {"batch", std::to_string(opt.batch)},
        {"momentum", format_double(opt.momentum)},
        {"reps", std::to_string(opt.reps)},
        {"bench_n", std::to_string(opt.bench_n)},
        {"tolerance", format_double(opt.tolerance)},
        {"seed", std::to_string(opt.seed)},
        {"x0", format_double(opt.x0)},
        {"out_dir", opt.out_dir},
    });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surrokit: neural-network surrogates for small numeric kernels"};
    app.require_subcommand(1);

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "generate a labelled dataset from a kernel");
    gen->add_option("region", gen_opt.region, "newton | lj")
        ->required()
        ->check(CLI::Validator(region_validator, "REGION"));
    gen->add_option("--n", gen_opt.n, "total samples before the split")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen->add_option("--train-frac", gen_opt.train_fraction, "training fraction of the split")
        ->capture_default_str();
    gen->add_option("--seed", gen_opt.seed, "rng seed")->capture_default_str();
    gen->add_option("--out-dir", gen_opt.out_dir, "output directory")->capture_default_str();
    gen->add_option("--disc-floor", gen_opt.disc_floor, "newton: discriminant floor")
        ->capture_default_str();
    gen->add_option("--x0", gen_opt.x0, "newton: fixed initial guess (default: drawn)");
    gen->add_option("--lj-epsilon", gen_opt.lj_epsilon, "lj: interaction strength")
        ->capture_default_str();
    gen->add_option("--lj-sigma", gen_opt.lj_sigma, "lj: length scale")->capture_default_str();
    gen->add_option("--r-min", gen_opt.r_min, "lj: min separation (default 0.9 sigma)");
    gen->add_option("--r-max", gen_opt.r_max, "lj: max separation (default 1.2 r_cut)");
    gen->set_config("--config");

    TrainOptions train_opt;
    CLI::App* train_cmd = app.add_subcommand("train", "train one surrogate model");
    train_cmd->add_option("--train", train_opt.train_path, "training CSV")->required();
    train_cmd->add_option("--val", train_opt.val_path, "validation CSV")->required();
    train_cmd->add_option("--topology", train_opt.topology, "layer sizes, e.g. 3x5x3x1")
        ->capture_default_str();
    train_cmd->add_option("--hidden-act", train_opt.hidden_act, "identity|relu|tanh|relu_tanh")
        ->capture_default_str();
    train_cmd->add_option("--output-act", train_opt.output_act, "output activation")
        ->capture_default_str();
    train_cmd->add_option("--lr", train_opt.lr, "learning rate")->capture_default_str();
    train_cmd->add_option("--momentum", train_opt.momentum, "momentum coefficient")
        ->capture_default_str();
    train_cmd->add_option("--batch", train_opt.batch, "minibatch size")->capture_default_str();
    train_cmd->add_option("--steps", train_opt.steps, "training steps")->capture_default_str();
    train_cmd->add_option("--log-every", train_opt.log_every, "trace cadence")
        ->capture_default_str();
    train_cmd->add_option("--tolerance", train_opt.tolerance, "accuracy tolerance_rel")
        ->capture_default_str();
    train_cmd->add_option("--seed", train_opt.seed, "rng seed")->capture_default_str();
    train_cmd->add_option("--out-dir", train_opt.out_dir, "output directory")
        ->capture_default_str();
    train_cmd->add_option("--model-name", train_opt.model_name, "model file name")
        ->capture_default_str();
    train_cmd->set_config("--config");

    EvalOptions eval_opt;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset");
    eval_cmd->add_option("--model", eval_opt.model_path, "model file")->required();
    eval_cmd->add_option("--data", eval_opt.data_path, "dataset CSV")->required();
    eval_cmd->add_option("--tolerance", eval_opt.tolerance, "accuracy tolerance_rel")
        ->capture_default_str();
    eval_cmd->add_option("--out-dir", eval_opt.out_dir, "output directory")
        ->capture_default_str();
    eval_cmd->set_config("--config");

    BenchOptions bench_opt;
    CLI::App* bench_cmd = app.add_subcommand("bench", "time original kernel vs surrogate");
    bench_cmd->add_option("region", bench_opt.region, "newton | lj")
        ->required()
        ->check(CLI::Validator(region_validator, "REGION"));
    bench_cmd->add_option("--model", bench_opt.model_path, "model file")->required();
    bench_cmd->add_option("--reps", bench_opt.reps, "timing repetitions (median)")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_opt.seed, "rng seed")->capture_default_str();
    bench_cmd->add_option("--tolerance", bench_opt.tolerance, "accuracy tolerance_rel")
        ->capture_default_str();
    bench_cmd->add_option("--batch-min", bench_opt.batch_min, "newton: smallest batch")
        ->capture_default_str();
    bench_cmd->add_option("--batch-max", bench_opt.batch_max, "newton: largest batch")
        ->capture_default_str();
    bench_cmd->add_option("--batch-step", bench_opt.batch_step, "newton: batch increment")
        ->capture_default_str();
    bench_cmd->add_option("--x0", bench_opt.x0, "newton: solver initial guess")
        ->capture_default_str();
    bench_cmd->add_option("--atoms", bench_opt.atoms, "lj: atom count")->capture_default_str();
    bench_cmd->add_option("--density", bench_opt.density, "lj: number density")
        ->capture_default_str();
    bench_cmd->add_option("--skin", bench_opt.skin, "lj: neighbor-list skin")
        ->capture_default_str();
    bench_cmd->add_option("--out-dir", bench_opt.out_dir, "output directory")
        ->capture_default_str();
    bench_cmd->set_config("--config");

    SweepOptions sweep_opt;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "train and bench a list of topologies");
    sweep_cmd->add_option("region", sweep_opt.region, "newton | lj")
        ->required()
        ->check(CLI::Validator(region_validator, "REGION"));
    sweep_cmd->add_option("--train", sweep_opt.train_path, "training CSV")->required();
    sweep_cmd->add_option("--val", sweep_opt.val_path, "validation CSV")->required();
    sweep_cmd->add_option("--topologies", sweep_opt.topologies,
                          "topology list (default: the region's standard sweep)")
        ->delimiter(',');
    sweep_cmd->add_option("--hidden-act", sweep_opt.hidden_act,
                          "hidden activation (default: tanh for newton, relu_tanh for lj)");
    sweep_cmd->add_option("--lr", sweep_opt.lr,
                          "learning rate (default: per-region, per-depth for lj)");
    sweep_cmd->add_option("--steps", sweep_opt.steps,
                          "training steps (default: 5000 newton, 10000 lj)");
    sweep_cmd->add_option("--batch", sweep_opt.batch, "minibatch size")->capture_default_str();
    sweep_cmd->add_option("--momentum", sweep_opt.momentum, "momentum coefficient")
        ->capture_default_str();
    sweep_cmd->add_option("--reps", sweep_opt.reps, "timing repetitions")->capture_default_str();
    sweep_cmd->add_option("--bench-n", sweep_opt.bench_n, "bench batch size")
        ->capture_default_str();
    sweep_cmd->add_option("--tolerance", sweep_opt.tolerance, "accuracy tolerance_rel")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_opt.seed, "rng seed")->capture_default_str();
    sweep_cmd->add_option("--x0", sweep_opt.x0, "newton: solver initial guess for benching")
        ->capture_default_str();
    sweep_cmd->add_option("--out-dir", sweep_opt.out_dir, "output directory")
        ->capture_default_str();
    sweep_cmd->set_config("--config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    sweep_opt.topologies_given = sweep_cmd->count("--topologies") > 0;

    try {
        if (gen->parsed()) return run_gen(gen_opt);
        if (train_cmd->parsed()) return run_train(train_opt);
        if (eval_cmd->parsed()) return run_eval(eval_opt);
        if (bench_cmd->parsed()) return run_bench(bench_opt);
        if (sweep_cmd->parsed()) return run_sweep(sweep_opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
