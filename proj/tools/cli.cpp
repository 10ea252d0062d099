#include "cli.hpp"

#include "cycloid/algebra.hpp"
#include "cycloid/error.hpp"
#include "cycloid/io.hpp"
#include "cycloid/net.hpp"
#include "cycloid/semantics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace cycloid::cli {

namespace {

using nlohmann::ordered_json;

CycloidSpec spec_of(const std::vector<Int>& params, std::size_t offset = 0) {
    return {params[offset], params[offset + 1], params[offset + 2], params[offset + 3]};
}

FoldSpec parse_fold(const CycloidSpec& spec, const std::string& text) {
    if (text == "total") return total_fold(spec);
    FoldSpec fold;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            fold.back_indices.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw std::domain_error("cannot read back index '" + item + "'");
        }
    }
    std::sort(fold.back_indices.begin(), fold.back_indices.end());
    fold.back_indices.erase(std::unique(fold.back_indices.begin(), fold.back_indices.end()),
                            fold.back_indices.end());
    return fold;
}

struct System {
    Net net;
    Marking marking;
};

System build_system(const CycloidSpec& spec, const std::string& fold_text, bool stop, bool force,
                    const std::string& marking_kind, Int k) {
    if (stop) {
        if (marking_kind != "regular")
            throw std::domain_error("stop-resilient systems use regular markings");
        Net net = stop_resilient(spec, force);
        Marking m = fold_marking(net, regular_marking(spec, k));
        return {std::move(net), std::move(m)};
    }
    Net net = synthesize(spec);
    if (spec.regular()) net = attach_regular_labels(std::move(net));
    Marking m = marking_kind == "standard" ? standard_marking(spec) : regular_marking(spec, k);
    if (!fold_text.empty()) {
        if (marking_kind == "standard")
            throw std::domain_error("foldings are defined over regular markings");
        Net folded = backward_fold(net, parse_fold(spec, fold_text));
        m = fold_marking(folded, m);
        return {std::move(folded), std::move(m)};
    }
    return {std::move(net), std::move(m)};
}

FiringRule parse_rule(const std::string& text) {
    if (text == "plain") return FiringRule::plain;
    if (text == "contact-free") return FiringRule::contact_free;
    throw std::domain_error("unknown firing rule '" + text + "' (plain, contact-free)");
}

std::string property_name(PropertyReport::Property p) {
    switch (p) {
    case PropertyReport::Property::safe: return "safe";
    case PropertyReport::Property::live: return "live";
    case PropertyReport::Property::bisimilar: return "bisimilar";
    case PropertyReport::Property::isomorphic: return "isomorphic";
    }
    return "?";
}

void print_report(std::ostream& out, const PropertyReport& report) {
    out << "property: " << property_name(report.property) << "\n";
    out << "holds: " << (report.holds ? "yes" : "no") << "\n";
    out << "states: " << report.states_explored << "\n";
    if (!report.conclusive) out << "inconclusive: " << report.note << "\n";
    if (!report.witness_firing.empty()) {
        out << "witness:";
        for (const NodeId& t : report.witness_firing) out << ' ' << to_string(t);
        out << "\n";
    }
    if (!report.offenders.empty()) {
        out << "offenders:";
        for (const NodeId& id : report.offenders) out << ' ' << to_string(id);
        out << "\n";
    }
    if (report.conclusive && !report.note.empty()) out << "note: " << report.note << "\n";
}

ordered_json report_json(const PropertyReport& report) {
    ordered_json j;
    j["property"] = property_name(report.property);
    j["holds"] = report.holds;
    j["conclusive"] = report.conclusive;
    j["states"] = report.states_explored;
    ordered_json witness = ordered_json::array();
    for (const NodeId& t : report.witness_firing) witness.push_back(to_string(t));
    j["witness"] = std::move(witness);
    ordered_json offenders = ordered_json::array();
    for (const NodeId& id : report.offenders) offenders.push_back(to_string(id));
    j["offenders"] = std::move(offenders);
    j["note"] = report.note;
    return j;
}

int report_exit(const PropertyReport& report) {
    if (!report.conclusive) return 3;
    return report.holds ? 0 : 1;
}

void print_system_summary(std::ostream& out, const System& sys, const std::string& fold_text) {
    out << to_string(sys.net.spec);
    if (!fold_text.empty()) out << " fold=" << fold_text;
    Int stops = 0;
    for (const NodeId& t : sys.net.transitions)
        if (t.kind == NodeKind::stop_transition) ++stops;
    out << ": " << sys.net.transitions.size() << " transitions";
    if (stops > 0) out << " (" << stops << " stop)";
    out << ", " << sys.net.places.size() << " places, " << sys.net.arcs.size() << " arcs\n";
    out << "marking: " << sys.marking.total() << " token(s) on " << sys.marking.counts.size()
        << " place(s)\n";
}

ordered_json system_json(const System& sys, const std::string& fold_text) {
    ordered_json j;
    j["spec"] = {{"alpha", sys.net.spec.alpha},
                 {"beta", sys.net.spec.beta},
                 {"gamma", sys.net.spec.gamma},
                 {"delta", sys.net.spec.delta}};
    if (!fold_text.empty()) j["fold"] = fold_text;
    j["transitions"] = sys.net.transitions.size();
    j["places"] = sys.net.places.size();
    j["arcs"] = sys.net.arcs.size();
    j["tokens"] = sys.marking.total();
    return j;
}

std::string bwd_label(const CycloidSpec& spec, const NodeId& member) {
    RegularCoordinate rc = regular_label(spec, member.pt);
    return to_string(RegularCoordinate{RegularCoordinate::Kind::bwd_place, rc.i, rc.j});
}

int run_info(std::ostream& out, const CycloidSpec& spec, bool as_json) {
    CycloidMetrics m = metrics(spec);
    MinimalCycle cyc = minimal_cycle_length(spec);
    const char* source = nullptr;
    switch (cyc.source) {
    case MinimalCycle::Source::formula_a: source = "formula_a"; break;
    case MinimalCycle::Source::formula_b: source = "formula_b"; break;
    case MinimalCycle::Source::formula_c: source = "formula_c"; break;
    case MinimalCycle::Source::search: source = "search"; break;
    }
    if (as_json) {
        ordered_json j;
        j["spec"] = {{"alpha", spec.alpha},
                     {"beta", spec.beta},
                     {"gamma", spec.gamma},
                     {"delta", spec.delta}};
        j["area"] = m.area;
        j["n"] = m.n;
        j["regular"] = m.is_regular;
        j["coregular"] = m.is_coregular;
        if (m.process_len) j["process_len"] = *m.process_len;
        if (m.coprocess_len) j["coprocess_len"] = *m.coprocess_len;
        j["fwd_cycles"] = {{"count", m.fwd_cycle_count},
                           {"length", m.fwd_cycle_len},
                           {"tokens", m.fwd_tokens_per_cycle}};
        j["bwd_cycles"] = {{"count", m.bwd_cycle_count},
                           {"length", m.bwd_cycle_len},
                           {"tokens", m.bwd_tokens_per_cycle}};
        j["min_cycle"] = cyc.value;
        j["min_cycle_source"] = source;
        out << j.dump(2) << "\n";
        return 0;
    }
    out << to_string(spec) << ": A=" << m.area;
    if (m.process_len) out << " p=" << *m.process_len;
    out << " n=" << m.n << " regular=" << (m.is_regular ? "yes" : "no") << "\n";
    out << "forward cycles: " << m.fwd_cycle_count << " of length " << m.fwd_cycle_len << ", "
        << m.fwd_tokens_per_cycle << " token(s) each\n";
    out << "backward cycles: " << m.bwd_cycle_count << " of length " << m.bwd_cycle_len << ", "
        << m.bwd_tokens_per_cycle << " token(s) each\n";
    out << "coregular: " << (m.is_coregular ? "yes" : "no") << "\n";
    out << "minimal cycle: " << cyc.value << " (" << source << ")\n";
    return 0;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"synthesis and analysis of cycloid nets"};
    app.require_subcommand(1);

    auto* info = app.add_subcommand("info", "derived metrics of a cycloid");
    std::vector<Int> info_params;
    bool info_json = false;
    info->add_option("params", info_params, "alpha beta gamma delta")->expected(4);
    info->add_flag("--json", info_json);

    auto* build = app.add_subcommand("build", "synthesize a net and print a summary");
    std::vector<Int> build_params;
    std::string build_fold, build_marking = "regular";
    Int build_k = 0;
    bool build_stop = false, build_force = false, build_json = false;
    build->add_option("params", build_params, "alpha beta gamma delta")->expected(4);
    build->add_option("--fold", build_fold, "back indices: 'total' or e.g. '0,2'");
    build->add_option("--marking", build_marking, "regular or standard")
        ->check(CLI::IsMember({"regular", "standard"}));
    build->add_option("--k", build_k, "follower index of the regular marking");
    build->add_flag("--stop", build_stop, "attach stop transitions (total fold)");
    build->add_flag("--force", build_force, "allow stop transitions beyond C(g,c,c,c)");
    build->add_flag("--json", build_json);

    auto* equiv = app.add_subcommand("equiv", "test two grid points for equivalence");
    std::vector<Int> equiv_params;
    bool equiv_json = false;
    equiv->add_option("params", equiv_params, "alpha beta gamma delta -- x1 y1 x2 y2")
        ->expected(8);
    equiv->add_flag("--json", equiv_json);

    auto* norm = app.add_subcommand("normalize", "canonical representative of a grid point");
    std::vector<Int> norm_params;
    bool norm_json = false;
    norm->add_option("params", norm_params, "alpha beta gamma delta -- x y")->expected(6);
    norm->add_flag("--json", norm_json);

    auto* fold = app.add_subcommand("fold", "list the classes of a backward folding");
    std::vector<Int> fold_params;
    std::string fold_fold = "total";
    bool fold_json = false;
    fold->add_option("params", fold_params, "alpha beta gamma delta")->expected(4);
    fold->add_option("--fold", fold_fold, "back indices: 'total' or e.g. '0,2'");
    fold->add_flag("--json", fold_json);

    auto* stop = app.add_subcommand("stop", "build a stop-resilient folding");
    std::vector<Int> stop_params;
    bool stop_force = false, stop_json = false;
    stop->add_option("params", stop_params, "g c  (or alpha beta gamma delta with --force)")
        ->expected(2, 4);
    stop->add_flag("--force", stop_force);
    stop->add_flag("--json", stop_json);

    auto* del = app.add_subcommand("delete", "delete one process from a folding");
    std::vector<Int> del_params;
    std::string del_fold = "total";
    Int del_process = -1;
    bool del_json = false;
    del->add_option("params", del_params, "alpha beta gamma delta")->expected(4);
    del->add_option("--fold", del_fold, "back indices: 'total' or e.g. '0,2'");
    del->add_option("--process", del_process, "process index to delete")->required();
    del->add_flag("--json", del_json);

    auto* check = app.add_subcommand("check", "run a property checker");
    std::vector<Int> check_params;
    std::string check_fold, check_marking = "regular", check_property, check_rule = "plain";
    std::string check_from;
    Int check_k = 0;
    std::size_t check_max_states = 1'000'000;
    bool check_json = false;
    check->add_option("params", check_params, "alpha beta gamma delta")->expected(0, 4);
    check->add_option("--fold", check_fold, "back indices: 'total' or e.g. '0,2'");
    check->add_option("--marking", check_marking, "regular or standard")
        ->check(CLI::IsMember({"regular", "standard"}));
    check->add_option("--k", check_k, "follower index of the regular marking");
    check->add_option("--property", check_property, "safe, live or bisim")
        ->required()
        ->check(CLI::IsMember({"safe", "live", "bisim"}));
    check->add_option("--rule", check_rule, "plain or contact-free")
        ->check(CLI::IsMember({"plain", "contact-free"}));
    check->add_option("--max-states", check_max_states, "state bound of the exploration");
    check->add_option("--from", check_from, "read the net and marking from a json export");
    check->add_flag("--json", check_json);

    auto* scenario = app.add_subcommand("scenario", "run the stop-and-delete scenario");
    std::vector<Int> scenario_params;
    bool scenario_json = false;
    scenario->add_option("params", scenario_params, "g c s")->expected(3);
    scenario->add_flag("--json", scenario_json);

    auto* iso = app.add_subcommand("iso", "compare two cycloids for isomorphism");
    std::vector<Int> iso_params;
    std::string iso_markings;
    bool iso_json = false;
    iso->add_option("params", iso_params, "alpha beta gamma delta alpha' beta' gamma' delta'")
        ->expected(8);
    iso->add_option("--markings", iso_markings, "respect markings: regular or standard")
        ->check(CLI::IsMember({"regular", "standard"}));
    iso->add_flag("--json", iso_json);

    auto* exp = app.add_subcommand("export", "serialize a net");
    std::vector<Int> exp_params;
    std::string exp_fold, exp_marking = "regular", exp_format, exp_output;
    Int exp_k = 0;
    bool exp_stop = false, exp_force = false;
    exp->add_option("params", exp_params, "alpha beta gamma delta")->expected(4);
    exp->add_option("--fold", exp_fold, "back indices: 'total' or e.g. '0,2'");
    exp->add_option("--marking", exp_marking, "regular or standard")
        ->check(CLI::IsMember({"regular", "standard"}));
    exp->add_option("--k", exp_k, "follower index of the regular marking");
    exp->add_option("--format", exp_format, "dot, pnml or json")
        ->required()
        ->check(CLI::IsMember({"dot", "pnml", "json"}));
    exp->add_option("-o,--output", exp_output, "output file (default: stdout)");
    exp->add_flag("--stop", exp_stop, "attach stop transitions (total fold)");
    exp->add_flag("--force", exp_force, "allow stop transitions beyond C(g,c,c,c)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (info->parsed()) return run_info(out, spec_of(info_params), info_json);

        if (build->parsed()) {
            System sys = build_system(spec_of(build_params), build_fold, build_stop, build_force,
                                      build_marking, build_k);
            if (build_json)
                out << system_json(sys, build_fold).dump(2) << "\n";
            else
                print_system_summary(out, sys, build_fold);
            return 0;
        }

        if (equiv->parsed()) {
            CycloidSpec spec = spec_of(equiv_params);
            Point a{equiv_params[4], equiv_params[5]};
            Point b{equiv_params[6], equiv_params[7]};
            const bool eq = equivalent(spec, a, b);
            if (equiv_json) {
                ParameterVector pv = parameter_vector(spec, b - a);
                ordered_json j;
                j["equivalent"] = eq;
                j["parameter_vector"] = {{"num1", pv.num1}, {"num2", pv.num2}, {"den", pv.den}};
                out << j.dump(2) << "\n";
            } else {
                out << (eq ? "true" : "false") << "\n";
            }
            return eq ? 0 : 1;
        }

        if (norm->parsed()) {
            CycloidSpec spec = spec_of(norm_params);
            NormalizationWitness w = normalize(spec, {norm_params[4], norm_params[5]});
            if (norm_json) {
                ordered_json j;
                j["m"] = w.m;
                j["n_steps"] = w.n_steps;
                j["representative"] = {w.representative.xi, w.representative.eta};
                out << j.dump(2) << "\n";
            } else {
                out << to_string(w.representative) << "\n";
            }
            return 0;
        }

        if (fold->parsed()) {
            CycloidSpec spec = spec_of(fold_params);
            auto classes = fold_classes(spec, parse_fold(spec, fold_fold));
            if (fold_json) {
                ordered_json j = ordered_json::array();
                for (const FoldClass& cls : classes) {
                    ordered_json members = ordered_json::array();
                    for (const NodeId& id : cls.members) members.push_back(bwd_label(spec, id));
                    j.push_back({{"index", cls.index}, {"members", std::move(members)}});
                }
                out << j.dump(2) << "\n";
            } else {
                for (const FoldClass& cls : classes) {
                    out << "S[" << cls.index << "] = {";
                    for (const NodeId& id : cls.members) out << ' ' << bwd_label(spec, id);
                    out << " }\n";
                }
            }
            return 0;
        }

        if (stop->parsed()) {
            if (stop_params.size() != 2 && stop_params.size() != 4)
                throw std::domain_error("stop expects 'g c' or 'alpha beta gamma delta'");
            CycloidSpec spec = stop_params.size() == 2
                                   ? CycloidSpec{stop_params[0], stop_params[1], stop_params[1],
                                                 stop_params[1]}
                                   : spec_of(stop_params);
            Net net = stop_resilient(spec, stop_force);
            Marking m = fold_marking(net, regular_marking(spec));
            System sys{std::move(net), std::move(m)};
            if (stop_json)
                out << system_json(sys, "total").dump(2) << "\n";
            else
                print_system_summary(out, sys, "total");
            return 0;
        }

        if (del->parsed()) {
            CycloidSpec spec = spec_of(del_params);
            Net folded = backward_fold(attach_regular_labels(synthesize(spec)),
                                       parse_fold(spec, del_fold));
            System sys{delete_process(folded, del_process), Marking{}};
            if (del_json)
                out << system_json(sys, del_fold).dump(2) << "\n";
            else
                print_system_summary(out, sys, del_fold);
            return 0;
        }

        if (check->parsed()) {
            const FiringRule rule = parse_rule(check_rule);
            PropertyReport report;
            if (check_property == "bisim") {
                if (!check_from.empty())
                    throw std::domain_error("bisim checks need the four parameters, not --from");
                if (check_params.size() != 4)
                    throw std::domain_error("bisim checks need alpha beta gamma delta");
                if (check_fold.empty()) throw std::domain_error("bisim checks need --fold");
                CycloidSpec spec = spec_of(check_params);
                Net base = attach_regular_labels(synthesize(spec));
                Net folded = backward_fold(base, parse_fold(spec, check_fold));
                report = check_fold_bisimulation(base, regular_marking(spec, check_k), folded,
                                                 rule, check_max_states);
            } else {
                System sys = [&]() -> System {
                    if (!check_from.empty()) {
                        std::ifstream in(check_from, std::ios::binary);
                        if (!in) throw std::domain_error("cannot open '" + check_from + "'");
                        std::ostringstream buffer;
                        buffer << in.rdbuf();
                        auto [net, m] = import_json(buffer.str());
                        return {std::move(net), std::move(m)};
                    }
                    if (check_params.size() != 4)
                        throw std::domain_error("expected alpha beta gamma delta or --from");
                    return build_system(spec_of(check_params), check_fold, false, false,
                                        check_marking, check_k);
                }();
                ReachabilityGraph rg = reachability(sys.net, sys.marking, rule, check_max_states);
                report = check_property == "safe" ? check_safety(rg)
                                                  : check_liveness(rg, sys.net.transitions);
            }
            if (check_json)
                out << report_json(report).dump(2) << "\n";
            else
                print_report(out, report);
            return report_exit(report);
        }

        if (scenario->parsed()) {
            StopScenarioResult result = stop_scenario_detail(
                scenario_params[0], scenario_params[1], scenario_params[2]);
            if (scenario_json) {
                ordered_json steps = ordered_json::array();
                for (const StopScenarioStep& step : result.steps) {
                    ordered_json j;
                    j["from"] = to_string(step.from);
                    j["to"] = to_string(step.to);
                    j["degenerate"] = step.degenerate_target;
                    j["isomorphic"] = step.iso.holds;
                    j["safe"] = step.safety.holds;
                    j["live"] = step.liveness.holds;
                    steps.push_back(std::move(j));
                }
                ordered_json j;
                j["steps"] = std::move(steps);
                j["holds"] = result.summary.holds;
                out << j.dump(2) << "\n";
            } else {
                int number = 1;
                for (const StopScenarioStep& step : result.steps) {
                    out << "step " << number++ << ": " << to_string(step.from) << " -> "
                        << to_string(step.to) << (step.degenerate_target ? " (degenerate)" : "")
                        << ": iso=" << (step.iso.holds ? "yes" : "no")
                        << " safe=" << (step.safety.holds ? "yes" : "no")
                        << " live=" << (step.liveness.holds ? "yes" : "no") << "\n";
                }
                out << "scenario: " << (result.summary.holds ? "holds" : "fails") << "\n";
            }
            return report_exit(result.summary);
        }

        if (iso->parsed()) {
            CycloidSpec a = spec_of(iso_params);
            CycloidSpec b = spec_of(iso_params, 4);
            std::optional<std::pair<Marking, Marking>> markings;
            if (iso_markings == "standard")
                markings = std::make_pair(standard_marking(a), standard_marking(b));
            else if (iso_markings == "regular")
                markings = std::make_pair(regular_marking(a), regular_marking(b));
            PropertyReport report = isomorphic(synthesize(a), synthesize(b), markings);
            if (iso_json) {
                ordered_json j = report_json(report);
                j["mapped_nodes"] = report.witness_mapping.size();
                out << j.dump(2) << "\n";
            } else {
                out << "isomorphic: " << (report.holds ? "yes" : "no");
                if (report.holds) out << " (" << report.witness_mapping.size() << " nodes mapped)";
                out << "\n";
                if (!report.note.empty()) out << "note: " << report.note << "\n";
            }
            return report_exit(report);
        }

        if (exp->parsed()) {
            System sys = build_system(spec_of(exp_params), exp_fold, exp_stop, exp_force,
                                      exp_marking, exp_k);
            ExportFormat format = exp_format == "dot"    ? ExportFormat::dot
                                  : exp_format == "pnml" ? ExportFormat::pnml
                                                         : ExportFormat::json;
            SerializedNet doc = export_net(sys.net, sys.marking, format);
            if (exp_output.empty()) {
                out << doc.payload;
            } else {
                std::ofstream file(exp_output, std::ios::binary);
                if (!file) throw std::domain_error("cannot write '" + exp_output + "'");
                file << doc.payload;
            }
            return 0;
        }
    } catch (const resource_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    err << "error: no command given\n";
    return 2;
}

} // namespace cycloid::cli
