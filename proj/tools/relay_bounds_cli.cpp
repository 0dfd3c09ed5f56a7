// Command-line front end: single-point evaluations and parameter sweeps for
// the relay-channel bound evaluators, with CSV or JSON emission.
//
// Exit codes: 0 success, 2 malformed flags, 3 invalid channel file,
// 4 internal search failure, 5 ordering violation in an emitted row.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relay/bsc_primitive.hpp"
#include "relay/channel_io.hpp"
#include "relay/discrete_primitive.hpp"
#include "relay/gaussian_primitive.hpp"
#include "relay/gaussian_relay.hpp"
#include "relay/iid_output.hpp"

namespace {

struct Row {
    std::vector<std::pair<std::string, double>> cells;
    void add(const std::string& k, double v) { cells.push_back({k, v}); }
};

struct SweepSpec {
    std::string var;
    double start = 0.0, stop = 0.0;
    int points = 0;

    double at(int i) const {
        return start + (stop - start) * double(i) / double(points - 1);
    }
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OrderingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SweepSpec parse_sweep(const std::string& text,
                      const std::vector<std::string>& allowed) {
    SweepSpec s;
    std::stringstream ss(text);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 4)
        throw UsageError("--sweep expects var:start:stop:points, got '" + text + "'");
    s.var = parts[0];
    for (auto& c : s.var) c = char(std::tolower(c));
    try {
        s.start = std::stod(parts[1]);
        s.stop = std::stod(parts[2]);
        s.points = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw UsageError("--sweep has non-numeric fields: '" + text + "'");
    }
    if (!(s.start < s.stop)) throw UsageError("--sweep requires start < stop");
    if (s.points < 2) throw UsageError("--sweep requires points >= 2");
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == s.var;
    if (!ok) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw UsageError("sweep variable '" + s.var + "' not supported here (use: " + list + ")");
    }
    return s;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void emit(const std::vector<Row>& rows, const std::string& out_path,
          const std::string& format) {
    std::string text;
    if (format == "csv") {
        std::string header;
        for (std::size_t i = 0; i < rows[0].cells.size(); ++i)
            header += (i ? "," : "") + rows[0].cells[i].first;
        text = header + "\n";
        for (const auto& r : rows) {
            std::string line;
            for (std::size_t i = 0; i < r.cells.size(); ++i)
                line += (i ? "," : "") + format_value(r.cells[i].second);
            text += line + "\n";
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json obj = nlohmann::json::object();
            for (const auto& [k, v] : r.cells) obj[k] = v;
            arr.push_back(obj);
        }
        text = arr.dump(2) + "\n";
    }
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << text;
    }
}

void require_ordering(bool ok, int row, const std::string& what) {
    if (!ok)
        throw OrderingError("ordering violation at row " + std::to_string(row) + ": " + what);
}

struct Profile {
    relay::gaussian::SearchConfig gaussian;
    relay::bsc::Grids bsc;
    relay::discrete::SearchConfig discrete;
    relay::iid::GaussianSearchConfig iid_gauss;
    relay::iid::DiscreteSearchConfig iid_disc;
};

Profile make_profile(const std::string& name, std::uint64_t seed) {
    Profile p;
    if (name == "fast") {
        p.gaussian.grid_points = 30;
        p.gaussian.zoom_rounds = 6;
        p.bsc = {51, 201, 101, 0};
        p.discrete.restarts = 24;
        p.iid_gauss.k2_points = 500;
        p.iid_disc.restarts = 8;
    } else if (name != "thorough") {
        throw UsageError("unknown search profile '" + name + "' (use fast or thorough)");
    }
    p.gaussian.seed = seed;
    p.discrete.seed = seed;
    p.iid_gauss.seed = seed;
    p.iid_disc.seed = seed;
    return p;
}

// evaluates sweep points concurrently but emits rows in sweep order
template <typename F>
std::vector<Row> sweep_rows(int points, F&& make_row) {
    std::vector<Row> rows(static_cast<std::size_t>(points));
    std::vector<std::future<void>> futs;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    int chunk = (points + int(hw) - 1) / int(hw);
    for (int lo = 0; lo < points; lo += chunk) {
        int hi = std::min(lo + chunk, points);
        futs.push_back(std::async(std::launch::async, [lo, hi, &rows, &make_row]() {
            for (int i = lo; i < hi; ++i) rows[std::size_t(i)] = make_row(i);
        }));
    }
    for (auto& f : futs) f.get();
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relay-bounds: capacity bounds for relay channels"};
    app.require_subcommand(1);

    double s12 = -1, s13 = -1, s23 = -1, c0 = -1, rho = -1;
    std::string sweep_text, channel_path, out_path, format = "csv", profile_name = "thorough";
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--s12", s12, "sender-to-relay SNR");
        sub->add_option("--s13", s13, "sender-to-receiver SNR");
        sub->add_option("--s23", s23, "relay-to-receiver SNR");
        sub->add_option("--c0", c0, "relay link capacity, bits");
        sub->add_option("--rho", rho, "crossover probability");
        sub->add_option("--sweep", sweep_text, "var:start:stop:points");
        sub->add_option("--channel", channel_path, "channel file (JSON)");
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "seed for stochastic restarts");
        sub->add_option("--search-profile", profile_name, "fast or thorough");
    };

    CLI::App* sc_grelay = app.add_subcommand("gaussian-relay", "scalar Gaussian relay channel");
    CLI::App* sc_gprim = app.add_subcommand("gaussian-primitive", "Gaussian product-form primitive relay");
    CLI::App* sc_bsc = app.add_subcommand("bsc", "symmetric binary primitive relay");
    CLI::App* sc_disc = app.add_subcommand("discrete", "discrete primitive relay from a channel file");
    CLI::App* sc_iidg = app.add_subcommand("iid-gaussian", "Gaussian relay with i.i.d. relay output");
    CLI::App* sc_iidd = app.add_subcommand("iid-discrete", "discrete relay with i.i.d. relay output");
    for (auto* sub : {sc_grelay, sc_gprim, sc_bsc, sc_disc, sc_iidg, sc_iidd}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    try {
        Profile prof = make_profile(profile_name, seed);
        std::vector<Row> rows;

        if (sc_grelay->parsed()) {
            std::optional<SweepSpec> sweep;
            if (!sweep_text.empty()) sweep = parse_sweep(sweep_text, {"s12", "s23"});
            auto need = [&](double v, const char* name) {
                if (v < 0 && (!sweep || sweep->var != name))
                    throw UsageError(std::string("--") + name + " is required");
            };
            need(s12, "s12"); need(s13, "s13"); need(s23, "s23");
            auto make_row = [&](int i) {
                relay::gaussian::ScalarRelaySnr q{s12, s13, s23};
                Row r;
                if (sweep) {
                    double v = sweep->at(i);
                    (sweep->var == "s12" ? q.s12 : q.s23) = v;
                    r.add(sweep->var, v);
                } else {
                    r.add("s12", q.s12); r.add("s13", q.s13); r.add("s23", q.s23);
                }
                auto cfg = prof.gaussian;
                cfg.threads = sweep ? 1 : 0;
                double cs = relay::gaussian::cutset_bound(q);
                double t2 = relay::gaussian::strengthened_bound(q, cfg).value;
                double df = relay::gaussian::decode_forward(q);
                double cf = relay::gaussian::compress_forward(q);
                r.add("cutset", cs); r.add("theorem2", t2); r.add("df", df); r.add("cf", cf);
                return r;
            };
            rows = sweep ? sweep_rows(sweep->points, make_row)
                         : std::vector<Row>{make_row(0)};
            for (int i = 0; i < int(rows.size()); ++i) {
                auto& c = rows[std::size_t(i)].cells;
                double cs = c.end()[-4].second, t2 = c.end()[-3].second,
                       df = c.end()[-2].second, cf = c.end()[-1].second;
                require_ordering(cf <= t2 + 1e-6, i, "cf > theorem2");
                require_ordering(t2 <= cs + 1e-6, i, "theorem2 > cutset");
                require_ordering(df <= cs + 1e-9, i, "df > cutset");
            }
        } else if (sc_gprim->parsed()) {
            std::optional<SweepSpec> sweep;
            if (!sweep_text.empty()) sweep = parse_sweep(sweep_text, {"s12", "s23", "c0"});
            if (s23 >= 0 && c0 >= 0)
                throw UsageError("give either --s23 or --c0, not both");
            bool sweeping_link = sweep && (sweep->var == "s23" || sweep->var == "c0");
            if (s12 < 0 && (!sweep || sweep->var != "s12"))
                throw UsageError("--s12 is required");
            if (s13 < 0) throw UsageError("--s13 is required");
            if (s23 < 0 && c0 < 0 && !sweeping_link)
                throw UsageError("--s23 or --c0 is required");
            auto make_row = [&](int i) {
                double cur_s12 = s12, cur_s23 = s23, cur_c0 = c0;
                Row r;
                if (sweep) {
                    double v = sweep->at(i);
                    if (sweep->var == "s12") cur_s12 = v;
                    else if (sweep->var == "s23") { cur_s23 = v; cur_c0 = -1; }
                    else { cur_c0 = v; cur_s23 = -1; }
                    r.add(sweep->var, v);
                }
                auto pg = cur_c0 >= 0
                              ? relay::primitive::PrimitiveGaussianParams::from_snr(cur_s12, s13, cur_c0)
                              : relay::primitive::PrimitiveGaussianParams::from_s23(cur_s12, s13, cur_s23);
                if (!sweep) {
                    r.add("s12", pg.s12); r.add("s13", pg.s13); r.add("c0", pg.c0);
                }
                r.add("prop5", relay::primitive::upper_bound(pg));
                r.add("wu", relay::primitive::wu_bound(pg));
                r.add("cutset", relay::primitive::cutset_bound(pg));
                r.add("df", relay::primitive::decode_forward(pg));
                r.add("cf", relay::primitive::compress_forward(pg));
                return r;
            };
            rows = sweep ? sweep_rows(sweep->points, make_row)
                         : std::vector<Row>{make_row(0)};
            for (int i = 0; i < int(rows.size()); ++i) {
                auto& c = rows[std::size_t(i)].cells;
                double p5 = c.end()[-5].second, wu = c.end()[-4].second,
                       cs = c.end()[-3].second, df = c.end()[-2].second, cf = c.end()[-1].second;
                require_ordering(std::abs(p5 - wu) <= 1e-8, i, "prop5 and wu disagree");
                require_ordering(cf <= p5 + 1e-9, i, "cf > prop5");
                require_ordering(df <= p5 + 1e-9, i, "df > prop5");
                require_ordering(p5 <= cs + 1e-9, i, "prop5 > cutset");
            }
        } else if (sc_bsc->parsed()) {
            std::optional<SweepSpec> sweep;
            if (!sweep_text.empty()) sweep = parse_sweep(sweep_text, {"c0", "rho"});
            if (rho < 0 && (!sweep || sweep->var != "rho"))
                throw UsageError("--rho is required");
            if (c0 < 0 && (!sweep || sweep->var != "c0"))
                throw UsageError("--c0 is required");
            std::optional<relay::bsc::Evaluator> shared;
            if (!sweep || sweep->var == "c0")
                shared.emplace(rho, prof.bsc);  // one envelope table reused
            auto make_row = [&](int i) {
                double cur_rho = rho, cur_c0 = c0;
                Row r;
                if (sweep) {
                    double v = sweep->at(i);
                    (sweep->var == "rho" ? cur_rho : cur_c0) = v;
                    r.add(sweep->var, v);
                } else {
                    r.add("rho", cur_rho); r.add("c0", cur_c0);
                }
                double t7;
                if (shared) {
                    t7 = shared->best(cur_c0).value;
                } else {
                    auto grids = prof.bsc;
                    grids.threads = 1;
                    t7 = relay::bsc::Evaluator(cur_rho, grids).best(cur_c0).value;
                }
                r.add("theorem7", t7);
                r.add("cf", relay::bsc::compress_forward({cur_rho, cur_c0}).value);
                return r;
            };
            if (sweep && sweep->var == "rho") {
                rows = sweep_rows(sweep->points, make_row);
            } else if (sweep) {
                for (int i = 0; i < sweep->points; ++i) rows.push_back(make_row(i));
            } else {
                rows.push_back(make_row(0));
            }
            for (int i = 0; i < int(rows.size()); ++i) {
                auto& c = rows[std::size_t(i)].cells;
                require_ordering(c.end()[-1].second <= c.end()[-2].second + 1e-3, i,
                                 "cf > theorem7");
            }
        } else if (sc_disc->parsed()) {
            if (channel_path.empty()) throw UsageError("--channel is required");
            auto ch = relay::io::load_primitive_channel(channel_path);
            if (c0 >= 0) ch.c0 = c0;
            std::optional<SweepSpec> sweep;
            if (!sweep_text.empty()) sweep = parse_sweep(sweep_text, {"c0"});
            auto make_row = [&](int i) {
                auto cur = ch;
                if (sweep) cur.c0 = sweep->at(i);
                Row r;
                r.add("c0", cur.c0);
                auto cfg = prof.discrete;
                cfg.threads = sweep ? 1 : 0;
                r.add("prop4", relay::discrete::upper_bound(cur, cfg).value);
                r.add("cf", relay::discrete::compress_forward_bound(cur, cfg).value);
                r.add("cutset", relay::discrete::cutset_bound(cur, cfg));
                return r;
            };
            rows = sweep ? sweep_rows(sweep->points, make_row)
                         : std::vector<Row>{make_row(0)};
            for (int i = 0; i < int(rows.size()); ++i) {
                auto& c = rows[std::size_t(i)].cells;
                double p4 = c[1].second, cf = c[2].second, cs = c[3].second;
                require_ordering(cf <= p4 + 1e-9, i, "cf > prop4");
                require_ordering(p4 <= cs + 1e-6, i, "prop4 > cutset");
            }
        } else if (sc_iidg->parsed()) {
            std::optional<SweepSpec> sweep;
            if (!sweep_text.empty()) sweep = parse_sweep(sweep_text, {"c0", "s12"});
            if (s12 < 0 && (!sweep || sweep->var != "s12"))
                throw UsageError("--s12 is required");
            if (s13 < 0) throw UsageError("--s13 is required");
            if (c0 < 0 && (!sweep || sweep->var != "c0"))
                throw UsageError("--c0 is required");
            auto make_row = [&](int i) {
                double cur_s12 = s12, cur_c0 = c0;
                Row r;
                if (sweep) {
                    double v = sweep->at(i);
                    (sweep->var == "s12" ? cur_s12 : cur_c0) = v;
                    r.add(sweep->var, v);
                } else {
                    r.add("s12", cur_s12); r.add("s13", s13); r.add("c0", cur_c0);
                }
                relay::iid::IidGaussianParams pr{1.0, 1.0 / s13, 1.0 / cur_s12, cur_c0};
                r.add("prop4", relay::iid::gaussian_upper_bound(pr, prof.iid_gauss).value);
                r.add("floor", pr.no_relay_floor());
                r.add("ceiling", pr.full_relay_ceiling());
                return r;
            };
            rows = sweep ? sweep_rows(sweep->points, make_row)
                         : std::vector<Row>{make_row(0)};
            for (int i = 0; i < int(rows.size()); ++i) {
                auto& c = rows[std::size_t(i)].cells;
                double b = c.end()[-3].second, fl = c.end()[-2].second, ce = c.end()[-1].second;
                require_ordering(b >= fl - 1e-6, i, "bound below the no-relay floor");
                require_ordering(b <= ce + 1e-6, i, "bound above the full-relay ceiling");
            }
        } else if (sc_iidd->parsed()) {
            if (channel_path.empty()) throw UsageError("--channel is required");
            auto ch = relay::io::load_iid_channel(channel_path);
            if (c0 >= 0) ch.c0 = c0;
            std::optional<SweepSpec> sweep;
            if (!sweep_text.empty()) sweep = parse_sweep(sweep_text, {"c0"});
            auto make_row = [&](int i) {
                auto cur = ch;
                if (sweep) cur.c0 = sweep->at(i);
                Row r;
                r.add("c0", cur.c0);
                auto cfg = prof.iid_disc;
                cfg.threads = sweep ? 1 : 0;
                auto aux = relay::iid::aux_receiver_estimate(cur, cfg);
                auto tu = relay::iid::tandon_ulukus_bound(
                    cur, cfg, {relay::iid::project_to_tu(cur, cfg, aux.argmax)});
                auto cfts = relay::iid::compress_forward_time_sharing(cur);
                r.add("tu", tu.value);
                r.add("cor10", aux.value);
                r.add("cfts", cfts.value);
                return r;
            };
            rows = sweep ? sweep_rows(sweep->points, make_row)
                         : std::vector<Row>{make_row(0)};
            for (int i = 0; i < int(rows.size()); ++i) {
                auto& c = rows[std::size_t(i)].cells;
                double tu = c[1].second, cor10 = c[2].second, cfts = c[3].second;
                require_ordering(cor10 <= tu + 1e-9, i, "cor10 > tu");
                require_ordering(cfts <= tu + 1e-9, i, "cfts > tu");
            }
        }

        emit(rows, out_path, format);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    } catch (const relay::io::ChannelFormatError& e) {
        std::cerr << "channel file error: " << e.what() << "\n";
        return 3;
    } catch (const OrderingError& e) {
        std::cerr << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "search failure: " << e.what() << "\n";
        return 4;
    }
}
