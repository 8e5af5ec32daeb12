#pragma once
// Witness extraction from realizers of relativized prenex statements, the
// backtracking game it plays, and related probes.
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "witness/kam.hpp"
#include "witness/proof.hpp"
#include "witness/sol2.hpp"

namespace witness::extract {

using kam::History;
using kam::LTerm;
using Matrix = eps::HostFn;  // arguments x1..xk then y1..yk; 0 means satisfied

enum class Polarity { Forall, Exists };

// Forall with k = 1 reads "for all x there is y"; Exists reads
// "there is x1, for all y1, ..., there is xk, for all yk".
struct PrenexStatement {
    unsigned k = 1;
    Polarity polarity = Polarity::Exists;
    std::string matrix_name;
    Matrix matrix;
};

// Matrices used by the examples and the command line: eq, fst, le, m2.
eps::FunctionRegistry standard_matrices();
PrenexStatement statement(const eps::FunctionRegistry& matrices, const std::string& name, unsigned k,
                          Polarity polarity);

// The statement with matrix (fn name x1..xk y1..yk) = 0, before relativization.
sol2::SOFormula statement_formula(const PrenexStatement& st);
// Throws TypeMismatch unless the judgment is closed and proves the relativized statement.
void require_type(const sol2::Judgment& theta, const PrenexStatement& st);

enum class Player { Exists, Forall };

struct Move {
    Player player;
    unsigned pos;
    Nat value;
    History from;  // position the move was played from
};

struct GameTranscript {
    std::vector<Move> moves;
    History final;
    std::uint64_t steps = 0;
};

std::string transcript_json(const GameTranscript& t);
GameTranscript transcript_from_json(const std::string& text);

enum class Status { Success, BudgetExceeded };

struct ExtractionResult {
    Status outcome = Status::BudgetExceeded;
    std::vector<Nat> witnesses;  // n1..nk, or p for the forall-exists form
    std::vector<Nat> answers;    // p1..pk
    GameTranscript transcript;
    std::uint64_t steps = 0;
    std::string bottom;
    std::vector<kam::InstrEvent> events;
};

// Answers of the universal player: gamma_i receives n1..ni.
using Gamma = std::function<Nat(const std::vector<Nat>&)>;

struct Opponent {
    enum class Kind { TermStrategy, HostFunctions, Interactive } kind = Kind::HostFunctions;
    std::vector<LTerm> terms;    // TermStrategy
    std::vector<Gamma> gammas;   // HostFunctions; optional cross-check for TermStrategy
    kam::OpponentFn ask;         // Interactive
};

Opponent term_strategy(std::vector<LTerm> terms, std::vector<Gamma> gammas = {});
Opponent host_functions(std::vector<Gamma> gammas);
// Prints each reached position to out and reads one natural per line from in;
// "q" or end of input aborts the run.
Opponent interactive(std::istream& in, std::ostream& out);

struct RunOptions {
    std::uint64_t budget = 1000000;
    std::uint64_t sub_budget = 100000;
};

ExtractionResult extract_pi2(const sol2::Judgment& theta, const PrenexStatement& st, const Nat& n,
                             const RunOptions& opt = {}, const LTerm& numeral = nullptr);

ExtractionResult extract_sigma2_strategy(const sol2::Judgment& theta, const PrenexStatement& st, const LTerm& t,
                                         const Gamma& gamma = nullptr, const RunOptions& opt = {});

ExtractionResult extract_prenex(const sol2::Judgment& theta, const PrenexStatement& st, const Opponent& opponent,
                                const RunOptions& opt = {});

struct Violation {
    std::size_t move;
    std::string reason;
};
std::optional<Violation> verify_transcript(const GameTranscript& tr, const PrenexStatement& st);

// Every kappa firing at position j > 0 extends a position reached by an
// earlier firing at j - 1.
bool kappa_ordering_holds(const std::vector<kam::InstrEvent>& events);

// Extends a matrix over (x0..xd, y1..yd) to (x0..xk, y1..yk); the new variables are ignored.
Matrix pad_matrix(const Matrix& m, unsigned d, unsigned k);
// Selector matrix over (x0..xk, y0..yk): y0 = 0 picks phi, otherwise psi.
Matrix combine_implication(const Matrix& phi, unsigned d_phi, const Matrix& psi, unsigned d_psi, unsigned k);

struct ProbeReport {
    bool reached_c = false;
    bool reached_c2 = false;
    bool contradiction = false;
    bool budget_exhausted = false;
    std::uint64_t steps = 0;
    std::string note;
};

ProbeReport double_bottom_probe(const LTerm& v, const LTerm& c, const LTerm& c2, std::uint64_t budget);

}  // namespace witness::extract
