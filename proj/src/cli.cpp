// SPDX-License-Identifier: Apache-2.0
#include "life/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "life/acceptance.hpp"
#include "life/error.hpp"
#include "life/forecaster.hpp"
#include "life/simulator.hpp"

namespace life {
namespace {

using ojson = nlohmann::ordered_json;

struct Opts {
    std::string config;
    std::string variant;
    std::string phase = "prefill";
    std::optional<std::uint64_t> prompt, gen, chunk, onchip, pad_tile;
    std::optional<double> tops, bw, ec, em, em_avg, latency;
    std::string hw_path;
    std::string format = "csv";
    std::string out;
    std::string plotdata;
    std::string grid, tops_axis, bw_axis, ec_axis, em_axis;
    std::string tiles, seq = "1:4096";
    std::vector<std::uint64_t> ranks;
    bool verbose = false;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ModelConfig load_model(const Opts& o) {
    if (o.config.empty() == o.variant.empty())
        throw ConfigError("exactly one of --config or --variant is required");
    if (!o.variant.empty()) return preset_variant(o.variant);
    return parse_model_config(read_file(o.config));
}

LayerGraph load_graph(const Opts& o) {
    LayerGraph g = build_model(load_model(o));
    if (o.onchip) {
        if (*o.onchip == 0) throw ConfigError("constraint violated: --onchip > 0");
        g.onchip_bytes = o.onchip;
    }
    if (o.pad_tile) g.attn.pad_tile = *o.pad_tile;
    return g;
}

// Decode-only forecasts never touch peak_tops, so it may be left out there.
std::pair<HardwareSpec, EfficiencyProfile> load_hw(const Opts& o, bool need_tops = true) {
    HardwareSpec hw;
    EfficiencyProfile eff;
    bool have_tops = false, have_bw = false;
    if (!o.hw_path.empty()) {
        std::tie(hw, eff) = parse_hardware(read_file(o.hw_path));
        have_tops = have_bw = true;
    }
    if (o.tops) hw.peak_tops = *o.tops, have_tops = true;
    if (o.bw) hw.peak_bw = *o.bw, have_bw = true;
    if (!have_bw) throw ConfigError("hardware needs --bw (or --hw FILE)");
    if (need_tops && !have_tops) throw ConfigError("hardware needs --tops and --bw (or --hw FILE)");
    if (o.latency) hw.dispatch_latency = *o.latency;
    if (o.onchip) hw.onchip_bytes = o.onchip;
    if (o.ec) eff.ec.fill(*o.ec);
    if (o.em) {
        eff.em.fill(*o.em);
        if (!eff.em_avg) eff.em_avg = *o.em;
    }
    if (o.em_avg) eff.em_avg = *o.em_avg;
    validate(hw);
    validate(eff);
    return {hw, eff};
}

ScenarioConfig scenario(const Opts& o, std::uint64_t prompt_default) {
    ScenarioConfig sc;
    sc.phase = parse_phase(o.phase);
    sc.prompt_len = o.prompt.value_or(prompt_default);
    sc.gen_len = o.gen.value_or(sc.phase == Phase::timeline ? 2000 : 1);
    if (sc.phase == Phase::chunked_prefill) {
        if (!o.chunk) throw ConfigError("--phase chunked_prefill needs --chunk");
        sc.chunk_size = *o.chunk;
    }
    validate(sc);
    return sc;
}

bool json_out(const Opts& o) { return parse_format(o.format) == Format::json; }

// --out wins; a relative --out goes under LIFE_OUT_DIR when set; with no
// --out, LIFE_OUT_DIR/<name> or stdout.
void emit(std::ostream& out, const Opts& o, const std::string& name, const std::string& text) {
    const char* dir = std::getenv("LIFE_OUT_DIR");
    std::filesystem::path path;
    if (!o.out.empty()) {
        path = o.out;
        if (dir && *dir && path.is_relative()) path = std::filesystem::path(dir) / path;
    } else if (dir && *dir) {
        path = std::filesystem::path(dir) / (name + (json_out(o) ? ".json" : ".csv"));
    } else {
        out << text;
        return;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_file(path.string(), text);
}

void maybe_plot(const Opts& o, const std::vector<PlotSeries>& series) {
    if (!o.plotdata.empty()) emit_plotdata(series, o.plotdata);
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size() || v == 0) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("bad list entry '" + item + "' (want positive integers)");
        }
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

int cmd_simulate(const Opts& o, std::ostream& out) {
    const auto g = load_graph(o);
    const auto sc = scenario(o, 2048);
    const auto s = simulate(g, sc);
    emit(out, o, "simulate", export_summary(s, parse_format(o.format)));
    std::vector<PlotSeries> plot;
    if (!s.per_token.empty()) {
        PlotSeries mem{"mem_gb", {}};
        for (std::size_t i = 0; i < s.per_token.size(); ++i)
            mem.points.emplace_back(static_cast<double>(i + 1), to_gb(s.per_token[i].traffic()));
        plot.push_back(std::move(mem));
    } else {
        PlotSeries ops{"tops_by_class", {}};
        for (const auto& [cls, d] : s.by_class)
            ops.points.emplace_back(static_cast<double>(cls), to_tops(d.opcount));
        plot.push_back(std::move(ops));
    }
    maybe_plot(o, plot);
    return 0;
}

int cmd_forecast(const Opts& o, std::ostream& out) {
    const auto g = load_graph(o);
    const auto sc = scenario(o, 2048);
    const bool decode = sc.phase == Phase::decode || sc.phase == Phase::timeline;
    auto [hw, eff] = load_hw(o, !decode || g.cfg.lora_merge_policy == LoraPolicy::ahead_of_time);
    const auto s = simulate(g, sc);
    ojson j;
    j["variant"] = o.variant.empty() ? o.config : o.variant;
    j["phase"] = std::string(to_string(sc.phase));
    j["prompt"] = sc.prompt_len;
    j["opcount"] = s.totals.opcount;
    j["traffic_gb"] = to_gb(s.totals.traffic());
    j["dispatches"] = s.dispatch_total;
    if (sc.phase == Phase::prefill || sc.phase == Phase::chunked_prefill) {
        const auto f = forecast_ttft(s, hw, eff);
        j["t_c"] = f.t_c;
        j["t_m"] = f.t_m;
        j["ttft"] = f.ttft;
        j["tc_over_tm"] = f.tc_over_tm;
        j["bound"] = f.tc_over_tm > 1 ? "compute" : "memory";
    } else {
        const auto f = forecast_tpot_tps(s, hw, eff);
        j["tpot"] = f.tpot;
        j["tps"] = f.tps;
        if (sc.phase == Phase::timeline) {
            const auto t = decode_tps_timeline(s, hw, eff);
            j["tps_first"] = t.first;
            j["tps_last"] = t.last;
            j["tps_drop_pct"] = t.drop_pct;
        }
    }
    if (g.cfg.lora_merge_policy == LoraPolicy::ahead_of_time)
        j["t_lora"] = forecast_lora_update(g.cfg, hw, eff);

    if (json_out(o)) {
        emit(out, o, "forecast", j.dump(2) + "\n");
    } else {
        std::string csv = "metric,value\n";
        for (const auto& [k, v] : j.items())
            csv += k + "," + (v.is_string() ? v.get<std::string>() : v.is_number_float() ? fmt(v.get<double>()) : v.dump()) + "\n";
        emit(out, o, "forecast", csv);
    }
    return 0;
}

int cmd_sweep(const Opts& o, std::ostream& out) {
    const auto g = load_graph(o);
    if (!o.tiles.empty()) {
        const auto tiles = parse_list(o.tiles);
        const auto range = parse_axis(o.seq + ":1");
        const auto rows = bmm_tiling_efficiency(tiles, g.attn.head_dim, g.attn.num_heads,
                                                static_cast<std::uint64_t>(range.front()),
                                                static_cast<std::uint64_t>(range.back()));
        std::string text;
        if (json_out(o)) {
            ojson j = ojson::array();
            for (const auto& r : rows)
                j.push_back({{"tile", r.tile}, {"seq", r.seq}, {"ideal_ops", r.ideal_ops},
                             {"padded_ops", r.padded_ops}, {"efficiency", r.efficiency},
                             {"running_avg", r.running_avg}, {"cum_ideal", r.cum_ideal},
                             {"cum_padded", r.cum_padded}});
            text = j.dump(2) + "\n";
        } else {
            text = "tile,seq,ideal_ops,padded_ops,efficiency,running_avg,cum_ideal,cum_padded\n";
            for (const auto& r : rows)
                text += std::to_string(r.tile) + "," + std::to_string(r.seq) + "," +
                        std::to_string(r.ideal_ops) + "," + std::to_string(r.padded_ops) + "," +
                        fmt(r.efficiency) + "," + fmt(r.running_avg) + "," + std::to_string(r.cum_ideal) +
                        "," + std::to_string(r.cum_padded) + "\n";
        }
        emit(out, o, "tiling", text);
        std::vector<PlotSeries> plot;
        for (auto t : tiles) {
            PlotSeries eff{"tile=" + std::to_string(t), {}}, avg{"tile=" + std::to_string(t) + " avg", {}};
            for (const auto& r : rows)
                if (r.tile == t) {
                    eff.points.emplace_back(static_cast<double>(r.seq), r.efficiency);
                    avg.points.emplace_back(static_cast<double>(r.seq), r.running_avg);
                }
            plot.push_back(std::move(eff));
            plot.push_back(std::move(avg));
        }
        maybe_plot(o, plot);
        return 0;
    }

    const auto sc = scenario(o, 2048);
    const auto s = simulate(g, sc);
    // fixed hardware (--tops and --bw without --grid) sweeps efficiencies instead
    const bool fixed_hw = o.grid.empty() && o.tops && o.bw;
    const std::string grid = o.grid.empty() ? "10:100:10" : o.grid;
    const auto tops = fixed_hw ? std::vector<double>{*o.tops}
                      : o.tops_axis.empty() ? parse_axis(grid) : parse_axis(o.tops_axis);
    const auto bw = fixed_hw ? std::vector<double>{*o.bw}
                    : o.bw_axis.empty() ? parse_axis(grid) : parse_axis(o.bw_axis);
    const auto ec = o.ec_axis.empty() ? std::vector<double>{o.ec.value_or(1.0)} : parse_axis(o.ec_axis);
    const auto em = o.em_axis.empty() ? std::vector<double>{o.em.value_or(1.0)} : parse_axis(o.em_axis);
    const auto points = efficiency_grid(s, tops, bw, ec, em, o.latency.value_or(0.0));
    if (json_out(o)) {
        ojson j = ojson::array();
        for (const auto& p : points)
            j.push_back({{"tops", p.tops}, {"bw", p.bw}, {"ec", p.ec}, {"em", p.em}, {"t_c", p.result.t_c},
                         {"t_m", p.result.t_m}, {"tc_over_tm", p.result.tc_over_tm}, {"ttft", p.result.ttft}});
        emit(out, o, "sweep", j.dump(2) + "\n");
    } else {
        emit(out, o, "sweep", grid_csv(points));
    }
    std::vector<PlotSeries> plot;
    for (const auto& p : points) {
        const std::string label = fixed_hw ? "em=" + fmt(p.em) : "bw=" + fmt(p.bw);
        if (plot.empty() || plot.back().label != label) plot.push_back({label, {}});
        plot.back().points.emplace_back(fixed_hw ? p.ec : p.tops, p.result.tc_over_tm);
    }
    maybe_plot(o, plot);
    return 0;
}

int cmd_timeline(const Opts& o, std::ostream& out, std::ostream& err) {
    const auto g = load_graph(o);
    auto [hw, eff] = load_hw(o, false);
    ScenarioConfig sc;
    sc.phase = Phase::timeline;
    sc.prompt_len = o.prompt.value_or(128);
    sc.gen_len = o.gen.value_or(2000);
    validate(sc);
    const auto s = simulate(g, sc);
    const auto t = decode_tps_timeline(s, hw, eff);
    if (json_out(o)) {
        ojson j;
        j["tps_first"] = t.first;
        j["tps_last"] = t.last;
        j["tps_drop_pct"] = t.drop_pct;
        ojson rows = ojson::array();
        for (std::size_t i = 0; i < t.tps.size(); ++i)
            rows.push_back({{"token_index", i + 1}, {"mem_rd", t.traffic[i].value()}, {"tpot", t.tpot[i]},
                            {"tps", t.tps[i]}});
        j["tokens"] = std::move(rows);
        emit(out, o, "timeline", j.dump(2) + "\n");
    } else {
        emit(out, o, "timeline", timeline_csv(t));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "tps first %.4g last %.4g drop %.1f%%  mem first %.3f GB last %.3f GB\n",
                  t.first, t.last, t.drop_pct, to_gb(t.traffic.front()), to_gb(t.traffic.back()));
    err << buf;
    PlotSeries mem{"mem_gb", {}}, tps{"tps", {}};
    for (std::size_t i = 0; i < t.tps.size(); ++i) {
        mem.points.emplace_back(static_cast<double>(i + 1), to_gb(t.traffic[i]));
        tps.points.emplace_back(static_cast<double>(i + 1), t.tps[i]);
    }
    maybe_plot(o, {mem, tps});
    return 0;
}

int cmd_compare_attention(const Opts& o, std::ostream& out) {
    const auto cfg = load_model(o);
    const MlaDims mla = cfg.mla_dims ? *cfg.mla_dims : *preset_variant("bf16-int4-mla").mla_dims;
    const auto rows = compare_attention(cfg, mla, o.prompt.value_or(8192), o.gen.value_or(2000));
    if (json_out(o)) {
        ojson j = ojson::array();
        for (const auto& r : rows)
            j.push_back({{"mode", r.mode}, {"mechanism", std::string(to_string(r.mechanism))},
                         {"mem_first_mib", r.first_mib}, {"mem_last_mib", r.last_mib}});
        emit(out, o, "attention", j.dump(2) + "\n");
    } else {
        emit(out, o, "attention", attention_csv(rows));
    }
    std::vector<PlotSeries> plot;
    for (const auto& r : rows) {
        if (plot.empty() || plot.back().label != r.mode) plot.push_back({r.mode, {}});
        plot.back().points.emplace_back(static_cast<double>(r.mechanism), r.first_mib);
    }
    maybe_plot(o, plot);
    return 0;
}

int cmd_lora(const Opts& o, std::ostream& out) {
    const auto cfg = load_model(o);
    std::vector<std::uint64_t> ranks = o.ranks;
    if (ranks.empty()) ranks = cfg.lora_rank ? std::vector<std::uint64_t>{*cfg.lora_rank}
                                             : std::vector<std::uint64_t>{16, 32, 64, 128};
    for (auto r : ranks)
        if (r == 0) throw ConfigError("constraint violated: --rank > 0");
    const bool timed = o.tops || o.bw || !o.hw_path.empty();
    std::optional<std::pair<HardwareSpec, EfficiencyProfile>> hw;
    if (timed) hw = load_hw(o);
    const auto proj = lora_projections(cfg);

    if (json_out(o)) {
        ojson j = ojson::array();
        for (auto r : ranks) {
            ojson layers = ojson::object();
            for (const auto& p : proj) layers[p.name] = to_gops(lora_merge_ops(p.k, p.n, r));
            ojson row{{"rank", r}, {"per_layer_gops", layers},
                      {"total_gops", to_gops(lora_merge_total(cfg, r).opcount)}};
            if (hw) row["t_lora"] = forecast_lora_update(cfg, hw->first, hw->second, r);
            j.push_back(row);
        }
        emit(out, o, "lora", j.dump(2) + "\n");
        return 0;
    }
    std::string csv = "layer,k,n";
    for (auto r : ranks) csv += ",r=" + std::to_string(r);
    csv += "\n";
    for (const auto& p : proj) {
        csv += p.name + "," + std::to_string(p.k) + "," + std::to_string(p.n);
        for (auto r : ranks) csv += "," + fmt(to_gops(lora_merge_ops(p.k, p.n, r)));
        csv += "\n";
    }
    csv += "total,,";
    for (auto r : ranks) csv += "," + fmt(to_gops(lora_merge_total(cfg, r).opcount));
    csv += "\n";
    if (hw) {
        csv += "t_lora_s,,";
        for (auto r : ranks) csv += "," + fmt(forecast_lora_update(cfg, hw->first, hw->second, r));
        csv += "\n";
    }
    emit(out, o, "lora", csv);
    return 0;
}

int cmd_validate(const Opts& o, std::ostream& out) {
    if (!o.config.empty() || !o.variant.empty()) {
        const auto cfg = load_model(o);
        validate(cfg);
        out << "config ok: " << cfg.num_decoder_layers << " layers, hidden " << cfg.hidden_size << ", "
            << (cfg.mla ? "MLA" : "MHA/GQA") << "\n";
        return 0;
    }
    int failed = 0;
    for (const auto& r : run_acceptance()) {
        out << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << "\n";
        for (const auto& d : r.details)
            if (o.verbose || d.rfind("FAIL", 0) == 0) out << "    " << d << "\n";
        failed += r.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}

}  // namespace

std::string plotdata_csv(const std::vector<PlotSeries>& series) {
    std::string out = "series_label,x,y\n";
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) out += s.label + "," + fmt(x) + "," + fmt(y) + "\n";
    return out;
}

void emit_plotdata(const std::vector<PlotSeries>& series, const std::string& path) {
    std::filesystem::path p = path;
    const char* dir = std::getenv("LIFE_OUT_DIR");
    if (dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    write_file(p.string(), plotdata_csv(series));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"analytical LLM inference workload simulator and forecaster", "life"};
    app.require_subcommand(1);
    Opts o;

    auto model_flags = [&](CLI::App* c) {
        c->add_option("--config", o.config, "model config JSON");
        c->add_option("--variant", o.variant, "built-in variant name");
    };
    auto scenario_flags = [&](CLI::App* c) {
        c->add_option("--phase", o.phase, "prefill|decode|chunked_prefill|timeline");
        c->add_option("--prompt", o.prompt, "prompt length");
        c->add_option("--gen", o.gen, "generated tokens");
        c->add_option("--chunk", o.chunk, "chunk size");
        c->add_option("--onchip", o.onchip, "on-chip bytes; larger kernels are split");
        c->add_option("--pad-tile", o.pad_tile, "pad attention key length to this tile");
    };
    auto hw_flags = [&](CLI::App* c) {
        c->add_option("--tops", o.tops, "peak TOPs/s");
        c->add_option("--bw", o.bw, "peak bandwidth, GB/s");
        c->add_option("--ec", o.ec, "compute efficiency, all classes");
        c->add_option("--em", o.em, "memory efficiency, all classes");
        c->add_option("--em-avg", o.em_avg, "average memory efficiency for TPOT");
        c->add_option("--dispatch-latency", o.latency, "seconds per dispatch");
        c->add_option("--hw", o.hw_path, "hardware JSON");
    };
    auto out_flags = [&](CLI::App* c) {
        c->add_option("--format", o.format, "json|csv");
        c->add_option("--out", o.out, "output file");
        c->add_option("--plotdata", o.plotdata, "long-format plot CSV");
    };

    auto* sim = app.add_subcommand("simulate", "workload summary for one scenario");
    model_flags(sim), scenario_flags(sim), out_flags(sim);
    auto* fc = app.add_subcommand("forecast", "TTFT or TPOT/TPS for one scenario");
    model_flags(fc), scenario_flags(fc), hw_flags(fc), out_flags(fc);
    auto* sw = app.add_subcommand("sweep", "tc/tm over a hardware or efficiency grid, or BMM tiling");
    model_flags(sw), scenario_flags(sw), hw_flags(sw), out_flags(sw);
    sw->add_option("--grid", o.grid, "lo:hi:step for both tops and bw axes");
    sw->add_option("--tops-axis", o.tops_axis, "lo:hi:step");
    sw->add_option("--bw-axis", o.bw_axis, "lo:hi:step");
    sw->add_option("--ec-axis", o.ec_axis, "lo:hi:step");
    sw->add_option("--em-axis", o.em_axis, "lo:hi:step");
    sw->add_option("--tiles", o.tiles, "comma list of tile sizes; switches to tiling analysis");
    sw->add_option("--seq", o.seq, "lo:hi sequence range for --tiles");
    auto* tl = app.add_subcommand("timeline", "per-token decode memory and TPS");
    model_flags(tl), scenario_flags(tl), hw_flags(tl), out_flags(tl);
    auto* ca = app.add_subcommand("compare-attention", "MHA/GQA/MQA/MLA decode memory per layer");
    model_flags(ca), scenario_flags(ca), out_flags(ca);
    auto* lo = app.add_subcommand("lora", "ahead-of-time adapter merge cost");
    model_flags(lo), hw_flags(lo), out_flags(lo);
    lo->add_option("--rank", o.ranks, "adapter ranks")->delimiter(',');
    auto* va = app.add_subcommand("validate", "run the built-in acceptance table, or check a config");
    model_flags(va);
    va->add_flag("-v,--verbose", o.verbose, "print every checked cell");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) return cmd_simulate(o, out);
        if (*fc) return cmd_forecast(o, out);
        if (*sw) return cmd_sweep(o, out);
        if (*tl) return cmd_timeline(o, out, err);
        if (*ca) return cmd_compare_attention(o, out);
        if (*lo) return cmd_lora(o, out);
        if (*va) return cmd_validate(o, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ForecastError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace life
