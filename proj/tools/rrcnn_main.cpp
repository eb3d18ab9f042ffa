// Command-line front end: dataset generation, training, decomposition,
// evaluation, gradient checking and batch-prediction timing.
//
// Exit codes: 0 success, 2 usage/config error, 3 training divergence,
// 4 model/input shape mismatch, 1 anything else.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "rrcnn/backprop.hpp"
#include "rrcnn/csv.hpp"
#include "rrcnn/dataset_io.hpp"
#include "rrcnn/envelope.hpp"
#include "rrcnn/examples.hpp"
#include "rrcnn/generators.hpp"
#include "rrcnn/iterative_filtering.hpp"
#include "rrcnn/model_io.hpp"
#include "rrcnn/train.hpp"

namespace fs = std::filesystem;
using namespace rrcnn;

namespace {

void write_snapshot(CLI::App& app, CLI::App* sub, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream f(fs::path(out_dir) / (sub->get_name() + "_config.txt"));
    f << "# resolved configuration (" << sub->get_name() << ")\n";
    f << app.config_to_str(true, false);
}

std::vector<int> parse_index_list(const std::string& s) {
    std::vector<int> out;
    if (trim(s).empty()) return out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ','))
        out.push_back(static_cast<int>(parse_long(trim(tok))) - 1); // 1-based on the CLI
    return out;
}

std::vector<std::pair<int, int>> parse_pair_list(const std::string& s) {
    std::vector<std::pair<int, int>> out;
    if (trim(s).empty()) return out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        const size_t dash = tok.find('-');
        if (dash == std::string::npos)
            throw CLI::ValidationError("--omega2", "pairs look like i-j, e.g. 1-2");
        out.emplace_back(static_cast<int>(parse_long(tok.substr(0, dash))) - 1,
                         static_cast<int>(parse_long(tok.substr(dash + 1))) - 1);
    }
    return out;
}

struct TrainFlags {
    std::string data_dir, out_dir, resume;
    int blocks = 0; // 0 = label count of the dataset
    int steps = 3, k1 = 33, k2 = 33;
    std::string loss = "mse";
    double eta = 0.0, gamma = 0.1;
    std::string omega1, omega2 = "1-2";
    TrainConfig cfg;
};

int run_train(CLI::App& app, CLI::App* sub, TrainFlags& fl) {
    SampleSet data = import_dataset(fl.data_dir);
    if (data.records.empty()) throw std::runtime_error("dataset is empty");
    const int m = fl.blocks > 0 ? fl.blocks
                                : static_cast<int>(data.records.front().labels.size());

    LossSpec spec;
    spec.kind = loss_kind_from_string(fl.loss);
    spec.eta = fl.eta;
    spec.gamma = spec.kind == LossKind::ORTHO_PENALTY ? fl.gamma : 0.0;
    if (spec.kind == LossKind::MSE_QTV) spec.omega1 = parse_index_list(fl.omega1);
    if (spec.kind == LossKind::ORTHO_PENALTY || spec.kind == LossKind::ORTHO_CONSTRAINED)
        spec.omega2 = parse_pair_list(fl.omega2);
    spec.validate(m);

    fs::create_directories(fl.out_dir);
    const fs::path model_path = fs::path(fl.out_dir) / "model.rrcnn";
    const fs::path history_path = fs::path(fl.out_dir) / "history.csv";

    TrainResult result;
    if (!fl.resume.empty()) {
        ModelParams start = load_weights(fl.resume);
        // continue epoch numbering from any existing history
        if (fs::exists(history_path)) {
            std::ifstream h(history_path);
            std::string line, last;
            std::getline(h, line); // header
            while (std::getline(h, line))
                if (!trim(line).empty()) last = line;
            if (!last.empty())
                fl.cfg.start_epoch =
                    static_cast<int>(parse_long(split_csv_line(last)[0])) + 1;
        }
        result = train_from(std::move(start), data, spec, fl.cfg);
    } else {
        ModelShape shape = ModelShape::uniform(m, fl.steps, fl.k1, fl.k2);
        result = train(data, shape, spec, fl.cfg);
    }

    save_weights(result.params, model_path.string());
    export_filters_csv(result.params, (fs::path(fl.out_dir) / "filters.csv").string());

    const bool fresh = fl.cfg.start_epoch == 0 || !fs::exists(history_path);
    std::ofstream h(history_path, fresh ? std::ios::trunc : std::ios::app);
    if (fresh) h << "epoch,train_loss,val_loss,lr\n";
    for (const auto& row : result.history)
        h << row.epoch << "," << format_g17(row.train_loss) << ","
          << format_g17(row.val_loss) << "," << format_g17(row.lr) << "\n";
    h.close();

    KeyValueFile manifest;
    manifest.set("model", "model.rrcnn");
    manifest.set("loss", fl.loss);
    manifest.set("eta", format_g17(spec.eta));
    manifest.set("gamma", format_g17(spec.gamma));
    manifest.set("seed", std::to_string(fl.cfg.seed));
    manifest.set("lr", format_g17(fl.cfg.lr));
    manifest.set("lr_ortho", format_g17(fl.cfg.lr_ortho));
    manifest.set("epochs", std::to_string(fl.cfg.epochs));
    manifest.set("batch", std::to_string(fl.cfg.batch));
    manifest.set("best_epoch", std::to_string(result.best_epoch));
    manifest.set("best_val_loss", format_g17(result.best_val_loss));
    manifest.save((fs::path(fl.out_dir) / "model_manifest.txt").string());

    write_snapshot(app, sub, fl.out_dir);
    std::cout << "trained " << result.history.size() << " epochs; best val loss "
              << format_g17(result.best_val_loss) << " at epoch " << result.best_epoch
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RRCNN signal decomposition toolbox"};
    app.require_subcommand(1);
    app.set_config("--config")->description("key=value config file ([subcommand] sections)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a synthetic table dataset");
    std::string gen_table, gen_out;
    Eigen::Index gen_n = 1024;
    uint64_t gen_seed = 42;
    gen->add_option("--table", gen_table, "table id")
        ->required()
        ->check(CLI::IsMember({"T2", "T6", "T8", "T10", "T12"}));
    gen->add_option("--n", gen_n, "samples per signal")->check(CLI::Range(64, 1 << 20));
    gen->add_option("--seed", gen_seed, "master seed")->envname("RRCNN_SEED");
    gen->add_option("--out", gen_out, "output directory")->required();

    // ---- train --------------------------------------------------------
    auto* tr = app.add_subcommand("train", "train a model on a generated dataset");
    TrainFlags fl;
    tr->add_option("--data", fl.data_dir, "dataset directory (from gen)")->required();
    tr->add_option("--out", fl.out_dir, "output directory")->required();
    tr->add_option("--resume", fl.resume, "checkpoint to continue from");
    tr->add_option("--blocks", fl.blocks, "cascade depth M (0 = label count)")
        ->check(CLI::Range(0, 16));
    tr->add_option("--steps", fl.steps, "recursions per block S")->check(CLI::Range(1, 64));
    tr->add_option("--k1", fl.k1, "first-layer filter length (odd)");
    tr->add_option("--k2", fl.k2, "second-layer filter length (odd)");
    tr->add_option("--loss", fl.loss, "loss kind")
        ->check(CLI::IsMember({"mse", "mse_qtv", "ortho_constrained", "ortho_penalty"}));
    tr->add_option("--eta", fl.eta, "QTV weight")->check(CLI::NonNegativeNumber);
    tr->add_option("--gamma", fl.gamma, "orthogonality penalty weight")
        ->check(CLI::NonNegativeNumber);
    tr->add_option("--omega1", fl.omega1, "QTV components, 1-based, e.g. 2,3");
    tr->add_option("--omega2", fl.omega2, "orthogonal pairs, 1-based, e.g. 1-2");
    tr->add_option("--lr", fl.cfg.lr, "learning rate")->check(CLI::PositiveNumber);
    tr->add_option("--lr-ortho", fl.cfg.lr_ortho, "ortho-matrix learning rate")
        ->check(CLI::PositiveNumber);
    tr->add_option("--epochs", fl.cfg.epochs, "epoch budget")->check(CLI::Range(1, 1000000));
    tr->add_option("--batch", fl.cfg.batch, "mini-batch size")->check(CLI::Range(1, 1 << 20));
    tr->add_option("--seed", fl.cfg.seed, "init/split seed")->envname("RRCNN_SEED");
    tr->add_flag("--no-halving", "disable halving the lr when the loss increases");
    tr->add_option("--tol", fl.cfg.tol, "early-stop improvement tolerance");
    tr->add_option("--patience", fl.cfg.patience, "early-stop patience (epochs)")
        ->check(CLI::Range(1, 1000000));
    tr->add_option("--threads", fl.cfg.threads, "worker lanes (0 = hardware)")
        ->check(CLI::Range(0, 256));
    tr->add_flag("--tree-reduce", fl.cfg.tree_reduce,
                 "pairwise-tree gradient reduction (faster, different rounding)");

    // ---- decompose ----------------------------------------------------
    auto* dec = app.add_subcommand("decompose", "decompose a signal CSV");
    std::string dec_model, dec_method, dec_input, dec_out;
    IfConfig dec_ifcfg;
    dec->add_option("--model", dec_model, "trained model checkpoint");
    dec->add_option("--method", dec_method, "baseline method instead of a model")
        ->check(CLI::IsMember({"if", "csa"}));
    dec->add_option("--input", dec_input, "input CSV (value or t,value)")->required();
    dec->add_option("--out", dec_out, "output directory")->required();
    dec->add_option("--xi", dec_ifcfg.xi, "IF filter-length multiplier")
        ->check(CLI::PositiveNumber);
    dec->add_option("--inner-tol", dec_ifcfg.inner_tol, "IF inner stop threshold");
    dec->add_option("--max-inner", dec_ifcfg.max_inner, "IF inner iteration cap");
    dec->add_option("--max-imfs", dec_ifcfg.max_imfs, "IF outer IMF cap");

    // ---- eval ---------------------------------------------------------
    auto* ev = app.add_subcommand("eval", "score methods on a benchmark example");
    std::string ev_example, ev_methods, ev_model, ev_out;
    Eigen::Index ev_n = 1024;
    ev->add_option("--example", ev_example, "example id")
        ->required()
        ->check(CLI::IsMember({"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"}));
    ev->add_option("--methods", ev_methods, "comma list of rrcnn,if,csa (default: all valid)");
    ev->add_option("--model", ev_model, "trained model for the rrcnn rows");
    ev->add_option("--n", ev_n, "grid size")->check(CLI::Range(64, 1 << 20));
    ev->add_option("--out", ev_out, "output directory")->required();

    // ---- gradcheck ----------------------------------------------------
    auto* gc = app.add_subcommand("gradcheck", "compare backprop against central differences");
    Eigen::Index gc_n = 128;
    uint64_t gc_seed = 7;
    int gc_blocks = 1, gc_steps = 3, gc_k1 = 33, gc_k2 = 33, gc_fault = -1;
    double gc_eps = 1e-6;
    std::string gc_loss = "mse";
    gc->add_option("--n", gc_n, "signal length (kept small)")->check(CLI::Range(8, 256));
    gc->add_option("--seed", gc_seed, "seed")->envname("RRCNN_SEED");
    gc->add_option("--blocks", gc_blocks, "M")->check(CLI::Range(1, 4));
    gc->add_option("--steps", gc_steps, "S")->check(CLI::Range(1, 8));
    gc->add_option("--k1", gc_k1, "K1");
    gc->add_option("--k2", gc_k2, "K2");
    gc->add_option("--eps", gc_eps, "central-difference step")
        ->check(CLI::Range(1e-8, 1e-4));
    gc->add_option("--loss", gc_loss, "loss kind")
        ->check(CLI::IsMember({"mse", "mse_qtv", "ortho_constrained", "ortho_penalty"}));
    gc->add_option("--inject-fault", gc_fault,
                   "corrupt this flat gradient coordinate to test the detector");

    // ---- bench --------------------------------------------------------
    auto* be = app.add_subcommand("bench", "time batched decomposition");
    std::string be_model, be_out;
    int be_copies = 100, be_threads = 1;
    Eigen::Index be_n = 1024;
    be->add_option("--model", be_model, "trained model checkpoint")->required();
    be->add_option("--copies", be_copies, "number of duplicate signals")
        ->check(CLI::Range(1, 1 << 20));
    be->add_option("--threads", be_threads, "worker lanes")->check(CLI::Range(1, 256));
    be->add_option("--n", be_n, "grid size")->check(CLI::Range(64, 1 << 20));
    be->add_option("--out", be_out, "output directory (bench.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            const TableId table = table_id_from_string(gen_table);
            SampleSet set = build_table_dataset(table, gen_n, gen_seed);
            export_dataset(set, gen_out, table, gen_n, gen_seed);
            write_snapshot(app, gen, gen_out);
            std::cout << "wrote " << set.records.size() << " records to " << gen_out << "\n";
        } else if (*tr) {
            fl.cfg.lr_halving = tr->count("--no-halving") == 0;
            return run_train(app, tr, fl);
        } else if (*dec) {
            if (dec_model.empty() == dec_method.empty())
                throw CLI::ValidationError("decompose",
                                           "pass exactly one of --model or --method");
            Signal x = read_signal_csv(dec_input);
            std::vector<Signal> comps;
            Signal residue;
            if (!dec_model.empty()) {
                ModelParams p = load_weights(dec_model);
                CascadeResult fwd = cascade_forward(x.samples, p);
                for (const auto& c : fwd.outputs) comps.push_back(with_samples(x, c));
                residue = with_samples(x, fwd.residue);
                // reconstruction check on the raw imfs
                Vec rec = fwd.residue;
                for (const auto& c : fwd.imfs) rec += c;
                std::cout << "reconstruction max error "
                          << format_g17((rec - x.samples).cwiseAbs().maxCoeff()) << "\n";
            } else if (dec_method == "if") {
                DecompositionResult r = if_decompose(x, dec_ifcfg);
                comps = r.imfs;
                residue = r.residue;
                Vec rec = residue.samples;
                for (const auto& c : comps) rec += c.samples;
                std::cout << "reconstruction max error "
                          << format_g17((rec - x.samples).cwiseAbs().maxCoeff()) << "\n";
            } else {
                Signal avg = csa_average(x);
                comps = {with_samples(x, x.samples - avg.samples)};
                residue = avg;
                std::cout << "reconstruction max error 0 (imf + average by construction)\n";
            }
            fs::create_directories(dec_out);
            std::ofstream f(fs::path(dec_out) / "components.csv");
            f << "t";
            for (size_t m = 0; m < comps.size(); ++m) f << ",imf_" << (m + 1);
            f << ",residue\n";
            for (Eigen::Index k = 0; k < x.size(); ++k) {
                f << format_g17(x.time(k));
                for (const auto& c : comps) f << "," << format_g17(c.samples[k]);
                f << "," << format_g17(residue.samples[k]) << "\n";
            }
            write_snapshot(app, dec, dec_out);
        } else if (*ev) {
            const ExampleId id = example_id_from_string(ev_example);
            std::set<std::string> methods;
            if (ev_methods.empty()) {
                methods = {"rrcnn", "if"};
                if (example_spec(id).average_task) methods.insert("csa");
            } else {
                std::istringstream is(ev_methods);
                std::string tok;
                while (std::getline(is, tok, ',')) methods.insert(trim(tok));
            }
            std::map<std::string, ModelParams> trained;
            if (!ev_model.empty())
                trained[to_string(example_spec(id).training_table)] = load_weights(ev_model);
            ExampleRun run = run_example(id, methods, trained, ev_n);
            fs::create_directories(ev_out);
            write_metrics_csv((fs::path(ev_out) / ("metrics_" + ev_example + ".csv")).string(),
                              run.reports);
            write_plot_csv((fs::path(ev_out) / ("plot_" + ev_example + ".csv")).string(), run);
            write_snapshot(app, ev, ev_out);
            for (const auto& r : run.reports) {
                std::cout << r.method << " " << r.component << ": mae "
                          << format_g17(r.mae_value) << " rmse " << format_g17(r.rmse_value);
                if (r.rho_value) std::cout << " rho " << format_g17(*r.rho_value);
                std::cout << "\n";
            }
        } else if (*gc) {
            ModelShape shape = ModelShape::uniform(gc_blocks, gc_steps, gc_k1, gc_k2);
            ModelParams p = init_params(shape, gc_seed);
            // random but reproducible probe signal and labels
            Rng rng(derive_seed(gc_seed, 99));
            Vec x(gc_n);
            for (Eigen::Index i = 0; i < gc_n; ++i) x[i] = rng.uniform(-1.0, 1.0);
            Mat label(gc_n, gc_blocks);
            for (Eigen::Index j = 0; j < label.cols(); ++j)
                for (Eigen::Index i = 0; i < gc_n; ++i) label(i, j) = rng.uniform(-1.0, 1.0);
            LossSpec spec;
            spec.kind = loss_kind_from_string(gc_loss);
            if (spec.kind == LossKind::MSE_QTV) {
                spec.eta = 0.1;
                spec.omega1 = {gc_blocks - 1};
            }
            if (spec.kind == LossKind::ORTHO_PENALTY ||
                spec.kind == LossKind::ORTHO_CONSTRAINED) {
                if (gc_blocks < 2)
                    throw CLI::ValidationError("gradcheck",
                                               "orthogonality losses need --blocks >= 2");
                spec.gamma = 0.1;
                spec.omega2 = {{0, 1}};
                if (spec.kind == LossKind::ORTHO_CONSTRAINED) {
                    OrthoParams op;
                    op.Wo = Mat::Identity(gc_n, gc_n);
                    op.omega2 = spec.omega2;
                    p.ortho = std::move(op);
                }
            }
            GradCheckReport rep = grad_check(p, x, label, spec, gc_eps, gc_fault);
            std::cout << "max relative deviation " << format_g17(rep.max_rel_dev) << " at "
                      << rep.worst_name << " (analytic " << format_g17(rep.analytic_at_worst)
                      << ", numeric " << format_g17(rep.numeric_at_worst) << ")\n";
            return rep.max_rel_dev < 1e-5 ? 0 : 1;
        } else if (*be) {
            ModelParams p = load_weights(be_model);
            Signal x = example_signal(ExampleId::E4, be_n);
            BenchRow row = bench_decompose(p, x, be_copies, be_threads);
            std::cout << "copies,threads,seconds\n"
                      << row.copies << "," << row.threads << ","
                      << format_g17(row.seconds) << "\n";
            std::cout << "per-signal ms: "
                      << format_g17(1000.0 * row.seconds / row.copies) << "\n";
            if (!be_out.empty()) {
                fs::create_directories(be_out);
                const fs::path path = fs::path(be_out) / "bench.csv";
                const bool fresh = !fs::exists(path);
                std::ofstream f(path, std::ios::app);
                if (fresh) f << "copies,threads,seconds\n";
                f << row.copies << "," << row.threads << "," << format_g17(row.seconds)
                  << "\n";
                write_snapshot(app, be, be_out);
            }
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const shape_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
