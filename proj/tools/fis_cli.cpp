// fis: command-line driver for the contour perception/representation engine.
// One command = one process = one state mutation; state files are written
// atomically (temp + rename) so interrupted runs never corrupt an instance.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fis/engine.hpp"
#include "fis/perception.hpp"
#include "fis/errors.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fis::Error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw fis::Error("cannot write '" + tmp + "'");
        out << bytes;
    }
    fs::rename(tmp, path);
}

fis::Engine load_engine(const std::string& state_path, const std::string& config_path,
                        std::uint64_t seed_override, bool has_seed) {
    if (!state_path.empty() && fs::exists(state_path)) {
        std::ifstream in(state_path, std::ios::binary);
        return fis::Engine::load(in);
    }
    fis::Config cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw fis::Error("cannot open config '" + config_path + "'");
        cfg = fis::Config::parse(in);
    }
    if (has_seed) cfg.seed = seed_override;
    return fis::Engine(cfg);
}

void save_engine(const fis::Engine& engine, const std::string& state_path) {
    if (state_path.empty()) return;
    write_file_atomic(state_path, engine.save_to_string());
}

void emit_trace(fis::Engine& engine, const std::string& trace_path) {
    const auto lines = engine.substrate().drain_trace();
    if (trace_path.empty()) {
        for (const auto& l : lines) std::cout << l << "\n";
        return;
    }
    std::ostringstream os;
    for (const auto& l : lines) os << l << "\n";
    write_file_atomic(trace_path, os.str());
}

fis::Grid load_grid_file(const std::string& path) {
    return fis::load_grid(read_file(path));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fis - modal/vector contour perception and hypothesis engine"};
    app.require_subcommand(1);

    std::string state_path, config_path, trace_path;
    std::uint64_t seed = 0;
    bool has_seed = false;
    app.add_option("--state", state_path, "engine state file")->envname("FIS_STATE");
    app.add_option("--config", config_path, "config file (key=value lines)");
    app.add_option("--trace", trace_path, "write the event trace to this file");
    app.add_option("--seed", seed, "seed override for fresh states")
        ->each([&](const std::string&) { has_seed = true; });

    // gen
    auto* gen = app.add_subcommand("gen", "rasterize a scene description to a grid");
    std::string gen_scene, gen_out;
    int gen_w = 64, gen_h = 64;
    gen->add_option("--scene", gen_scene, "scene description file")->required();
    gen->add_option("--out", gen_out, "output grid file")->required();
    gen->add_option("--width", gen_w, "grid width");
    gen->add_option("--height", gen_h, "grid height");

    // perceive
    auto* perceive = app.add_subcommand("perceive", "run the presentation pipeline");
    std::string perceive_grid;
    perceive->add_option("--grid", perceive_grid, "grid file")->required();

    // learn
    auto* learn = app.add_subcommand("learn", "drive concept learning from a corpus");
    std::string learn_corpus;
    bool learn_teacher = false, learn_self = false;
    learn->add_option("--corpus", learn_corpus, "corpus file")->required();
    learn->add_flag("--teacher", learn_teacher, "learning with the teacher");
    learn->add_flag("--self", learn_self, "self-learning");

    // recognize
    auto* recognize = app.add_subcommand("recognize", "perceive and identify");
    std::string recognize_grid;
    recognize->add_option("--grid", recognize_grid, "grid file")->required();

    // hypothesize
    auto* hyp = app.add_subcommand("hypothesize", "parse and resolve a hypothesis");
    std::string hyp_line;
    bool hyp_isolated = false, hyp_commit = false;
    hyp->add_option("--line", hyp_line, "hypothesis line")->required();
    hyp->add_flag("--isolated", hyp_isolated, "sever the z1 link");
    hyp->add_flag("--commit", hyp_commit, "commit the verdict to the store");

    // align
    auto* align = app.add_subcommand("align", "align two instances on shared grids");
    std::string align_a, align_b;
    std::vector<std::string> align_grids;
    align->add_option("--state-a", align_a, "first instance state")->required();
    align->add_option("--state-b", align_b, "second instance state")->required();
    align->add_option("--grids", align_grids, "shared grid files")->required();

    // check
    auto* check = app.add_subcommand("check", "run the z1/z2 consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            std::istringstream scene(read_file(gen_scene));
            const auto objects = fis::parse_scene(scene);
            fis::Grid grid(gen_w, gen_h);
            for (const auto& o : objects) {
                const fis::Grid layer = fis::rasterize(o, gen_w, gen_h);
                for (const auto& cell : layer.one_cells()) grid.set(cell, true);
            }
            // scene contract: objects stay separable for capture
            const auto components = fis::scan_capture(grid).size();
            if (components != objects.size())
                std::cerr << "warning: " << objects.size() << " objects fused into "
                          << components << " component(s); keep a background gap\n";
            write_file_atomic(gen_out, fis::save_grid(grid));
            std::cout << "wrote " << gen_out << " (" << grid.count_ones()
                      << " contour cells)\n";
            return 0;
        }

        if (perceive->parsed()) {
            fis::Engine engine = load_engine(state_path, config_path, seed, has_seed);
            const auto result = engine.perceive(load_grid_file(perceive_grid));
            emit_trace(engine, trace_path);
            for (const auto& fr : result.figures)
                std::cout << "presentation ax=" << fr.axiom << " addr="
                          << fr.output.signal << " zone=" << fr.output.zone << "."
                          << fr.output.subzone << "\n";
            if (result.scene_axiom)
                std::cout << "scene ax=" << *result.scene_axiom << "\n";
            save_engine(engine, state_path);
            return 0;
        }

        if (learn->parsed()) {
            if (learn_teacher == learn_self)
                throw CLI::ValidationError("learn", "pass exactly one of --teacher/--self");
            fis::Engine engine = load_engine(state_path, config_path, seed, has_seed);
            std::istringstream corpus(read_file(learn_corpus));
            const auto report = engine.learn_corpus(corpus, learn_teacher,
                                                    load_grid_file);
            emit_trace(engine, trace_path);
            for (const auto& line : report) std::cout << line << "\n";
            save_engine(engine, state_path);
            return 0;
        }

        if (recognize->parsed()) {
            fis::Engine engine = load_engine(state_path, config_path, seed, has_seed);
            const auto results = engine.recognize(load_grid_file(recognize_grid));
            emit_trace(engine, trace_path);
            for (const auto& r : results)
                std::cout << "class=" << r.label.value_or("none") << " address="
                          << r.address << " zone=" << r.zone << "." << r.subzone
                          << " ax=" << r.axiom << "\n";
            save_engine(engine, state_path);
            return 0;
        }

        if (hyp->parsed()) {
            fis::Engine engine = load_engine(state_path, config_path, seed, has_seed);
            const fis::Hypothesis h = fis::parse_hypothesis(hyp_line);
            if (hyp_isolated) engine.z2().set_link_enabled(false);
            const fis::Verdict v = engine.z2().resolve(engine.kernel(), h);
            std::cout << fis::verdict_status_name(v.status);
            if (v.status == fis::VerdictStatus::False)
                std::cout << " criterion=" << v.falsity_criterion;
            for (const auto& [var, sym] : v.bindings)
                std::cout << " ?" << var << "=" << sym;
            std::cout << "\n";
            if (hyp_commit && v.status != fis::VerdictStatus::Undecidable) {
                engine.z2().commit_verdict(engine.kernel(), h, v);
                save_engine(engine, state_path);
            }
            emit_trace(engine, trace_path);
            return v.status == fis::VerdictStatus::ActuallyTrue ||
                           v.status == fis::VerdictStatus::ConditionallyTrue
                       ? 0
                       : 1;
        }

        if (align->parsed()) {
            std::ifstream ina(align_a, std::ios::binary);
            if (!ina) throw fis::Error("cannot open '" + align_a + "'");
            std::ifstream inb(align_b, std::ios::binary);
            if (!inb) throw fis::Error("cannot open '" + align_b + "'");
            fis::Engine a = fis::Engine::load(ina);
            fis::Engine b = fis::Engine::load(inb);
            std::vector<fis::Grid> grids;
            for (const auto& g : align_grids) grids.push_back(load_grid_file(g));
            const auto report = fis::align_alphabets(a, b, grids);
            for (const auto& e : report.entries)
                std::cout << "map " << e.a_symbol << " <-> " << e.b_symbol
                          << " common=" << e.common << "\n";
            for (const auto k : report.skipped)
                std::cout << "skipped grid #" << k << "\n";
            std::cout << (report.bijective ? "bijective" : "NOT bijective") << "\n";
            write_file_atomic(align_a, a.save_to_string());
            write_file_atomic(align_b, b.save_to_string());
            return report.bijective ? 0 : 1;
        }

        if (check->parsed()) {
            fis::Engine engine = load_engine(state_path, config_path, seed, has_seed);
            const auto report = engine.kernel().check_z1_properties();
            std::cout << "numbered=" << (report.all_numbered ? "ok" : "FAIL")
                      << " bijective=" << (report.bijective ? "ok" : "FAIL")
                      << " disjoint=" << (report.no_rejected_stored ? "ok" : "FAIL")
                      << " dense=" << (report.dense ? "ok" : "FAIL") << "\n";
            for (const auto& d : report.diagnostics) std::cout << d << "\n";
            bool closure = true;
            for (const auto& [sym, sd] : engine.z2().alphabet())
                if (sd.bindings.empty()) {
                    closure = false;
                    std::cout << "unbound SD " << sym << "\n";
                }
            std::cout << "z2-closure=" << (closure ? "ok" : "FAIL") << "\n";
            const auto dormant = engine.dormant_axioms();
            std::cout << "dormant-axioms=" << dormant.size() << "\n";
            return report.ok() && closure ? 0 : 1;
        }
    } catch (const fis::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    } catch (const fis::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const fis::ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const fis::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
