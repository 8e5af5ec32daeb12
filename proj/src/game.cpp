#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include <json.hpp>

#include "witness/error.hpp"
#include "witness/extract.hpp"

namespace witness::extract {

using json = nlohmann::json;

Opponent term_strategy(std::vector<LTerm> terms, std::vector<Gamma> gammas) {
    Opponent o;
    o.kind = Opponent::Kind::TermStrategy;
    o.terms = std::move(terms);
    o.gammas = std::move(gammas);
    return o;
}

Opponent host_functions(std::vector<Gamma> gammas) {
    Opponent o;
    o.kind = Opponent::Kind::HostFunctions;
    o.gammas = std::move(gammas);
    return o;
}

Opponent interactive(std::istream& in, std::ostream& out) {
    Opponent o;
    o.kind = Opponent::Kind::Interactive;
    o.ask = [&in, &out](unsigned j, const Nat& n, const History& h) -> Nat {
        out << "position:";
        if (h.empty()) out << " start";
        for (const auto& [a, b] : h) out << " (" << a << " " << b << ")";
        out << "\nexists plays x" << j + 1 << " = " << n << "; answer y" << j + 1 << " (q quits): " << std::flush;
        std::string line;
        while (std::getline(in, line)) {
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
            if (line == "q" || line == "quit") fail("InteractiveAbort", "opponent quit");
            if (line.find_first_not_of("0123456789") == std::string::npos) {
                out << "\n";
                return parse_nat(line);
            }
            out << "expected a natural number: " << std::flush;
        }
        fail("InteractiveAbort", "opponent input ended");
    };
    return o;
}

namespace {

json nat_json(const Nat& n) {
    if (n <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(n);
    return to_string(n);
}

Nat json_nat(const json& j) {
    if (j.is_number_unsigned()) return Nat(j.get<std::uint64_t>());
    if (j.is_string()) return parse_nat(j.get<std::string>());
    fail("SyntaxError", "expected a natural number in transcript");
}

json history_json(const History& h) {
    json out = json::array();
    for (const auto& [n, p] : h) out.push_back(json::array({nat_json(n), nat_json(p)}));
    return out;
}

History json_history(const json& j) {
    History h;
    for (const auto& pr : j) {
        if (!pr.is_array() || pr.size() != 2) fail("SyntaxError", "expected [n, p] pairs in transcript");
        h.emplace_back(json_nat(pr[0]), json_nat(pr[1]));
    }
    return h;
}

}  // namespace

std::string transcript_json(const GameTranscript& t) {
    json moves = json::array();
    for (const auto& m : t.moves)
        moves.push_back({{"player", m.player == Player::Exists ? "exists" : "forall"},
                         {"pos", m.pos},
                         {"value", nat_json(m.value)},
                         {"from", history_json(m.from)}});
    json out = {{"moves", moves}, {"final", history_json(t.final)}, {"steps", t.steps}};
    return out.dump();
}

GameTranscript transcript_from_json(const std::string& text) {
    GameTranscript t;
    try {
        auto j = json::parse(text);
        for (const auto& m : j.at("moves")) {
            auto who = m.at("player").get<std::string>();
            if (who != "exists" && who != "forall") fail("SyntaxError", "unknown player '" + who + "'");
            t.moves.push_back({who == "exists" ? Player::Exists : Player::Forall, m.at("pos").get<unsigned>(),
                               json_nat(m.at("value")), m.contains("from") ? json_history(m.at("from")) : History{}});
        }
        t.final = json_history(j.at("final"));
        t.steps = j.value("steps", std::uint64_t{0});
    } catch (const json::exception& e) {
        fail("SyntaxError", std::string("malformed transcript: ") + e.what());
    }
    return t;
}

std::optional<Violation> verify_transcript(const GameTranscript& tr, const PrenexStatement& st) {
    auto matrix_holds = [&](const History& h) {
        std::vector<Nat> args;
        for (const auto& pr : h) args.push_back(pr.first);
        for (const auto& pr : h) args.push_back(pr.second);
        return st.matrix(args) == 0;
    };
    const std::size_t end = tr.moves.size();
    if (st.polarity == Polarity::Forall) {
        if (tr.moves.empty() || tr.moves[0].player != Player::Forall || tr.moves[0].pos != 0)
            return Violation{0, "the game starts with the universal move"};
        for (std::size_t i = 1; i < end; ++i)
            if (tr.moves[i].player != Player::Exists || tr.moves[i].pos != 0)
                return Violation{i, "only existential answers follow the universal move"};
        if (tr.final.size() != 1 || end < 2) return Violation{end, "no final answer"};
        if (tr.final[0].first != tr.moves[0].value || tr.final[0].second != tr.moves.back().value)
            return Violation{end, "final pair differs from the last moves"};
        if (!matrix_holds(tr.final)) return Violation{end, "final pair fails the matrix"};
        return std::nullopt;
    }
    std::set<History> reached = {History{}};
    for (std::size_t i = 0; i < end; i += 2) {
        const Move& e = tr.moves[i];
        if (e.player != Player::Exists) return Violation{i, "expected an existential move"};
        if (i + 1 >= end) return Violation{i, "proposal left unanswered"};
        const Move& a = tr.moves[i + 1];
        if (a.player != Player::Forall) return Violation{i + 1, "expected a universal move"};
        if (a.pos != e.pos || a.from != e.from) return Violation{i + 1, "answer does not match the proposal"};
        if (e.pos >= st.k || e.from.size() != e.pos) return Violation{i, "move position out of range"};
        if (!reached.count(e.from)) return Violation{i, "restart from a position never reached"};
        History next = e.from;
        next.emplace_back(e.value, a.value);
        reached.insert(next);
    }
    if (tr.final.size() != st.k) return Violation{end, "final position has the wrong length"};
    if (!tr.moves.empty() && !reached.count(tr.final)) return Violation{end, "final position never reached"};
    if (!matrix_holds(tr.final)) return Violation{end, "final position fails the matrix"};
    return std::nullopt;
}

bool kappa_ordering_holds(const std::vector<kam::InstrEvent>& events) {
    std::set<History> reached = {History{}};
    for (const auto& e : events) {
        if (e.kind != kam::LK::Kappa) continue;
        if (e.history.size() != e.j || !reached.count(e.history)) return false;
        History next = e.history;
        next.emplace_back(e.args.at(0), e.result);
        reached.insert(next);
    }
    return true;
}

Matrix pad_matrix(const Matrix& m, unsigned d, unsigned k) {
    if (d > k) fail("DepthMismatch", "cannot pad depth " + std::to_string(d) + " down to " + std::to_string(k));
    return [m, d, k](const std::vector<Nat>& v) {
        if (v.size() != 2 * k + 1) fail("ArityError", "padded matrix expects " + std::to_string(2 * k + 1) + " arguments");
        std::vector<Nat> args(v.begin(), v.begin() + d + 1);
        args.insert(args.end(), v.begin() + k + 1, v.begin() + k + 1 + d);
        return m(args);
    };
}

Matrix combine_implication(const Matrix& phi, unsigned d_phi, const Matrix& psi, unsigned d_psi, unsigned k) {
    if (d_phi > k || d_psi > k)
        fail("DepthMismatch", "statements of depth " + std::to_string(d_phi) + " and " + std::to_string(d_psi) +
                                  " do not fit depth " + std::to_string(k));
    Matrix a = pad_matrix(phi, d_phi, k), b = pad_matrix(psi, d_psi, k);
    return [a, b, k](const std::vector<Nat>& v) {
        if (v.size() != 2 * k + 2) fail("ArityError", "combined matrix expects " + std::to_string(2 * k + 2) + " arguments");
        std::vector<Nat> rest(v.begin(), v.begin() + k + 1);
        rest.insert(rest.end(), v.begin() + k + 2, v.end());
        return v[k + 1] == 0 ? a(rest) : b(rest);
    };
}

ProbeReport double_bottom_probe(const LTerm& v, const LTerm& c, const LTerm& c2, std::uint64_t budget) {
    ProbeReport rep;
    kam::Stack rho = kam::make_stack({kam::inert("rho")}, "rho");
    auto at = [&](const LTerm& target) {
        return [&rho, target](const kam::Process& p) {
            return kam::same_inert(p.head, target) && p.stack.top == rho.top && p.stack.bottom == rho.bottom;
        };
    };
    for (int i = 0; i < 2; ++i) {
        kam::InstructionEnv env;
        auto r = kam::run({v, rho}, budget, {at(i == 0 ? c : c2)}, env);
        (i == 0 ? rep.reached_c : rep.reached_c2) = r.outcome == kam::Outcome::WatcherHit;
        rep.budget_exhausted = rep.budget_exhausted || r.outcome == kam::Outcome::BudgetExceeded;
        rep.steps = std::max(rep.steps, r.steps);
    }
    rep.contradiction = rep.reached_c && rep.reached_c2;
    rep.note = rep.contradiction ? "both constant states reached"
               : rep.reached_c || rep.reached_c2
                   ? "one constant state reached; the run stops there since a constant head has no rule"
                   : "neither constant state reached";
    return rep;
}

}  // namespace witness::extract
