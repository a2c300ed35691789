#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kext/bitstring.hpp"

namespace kext {

/// Cache/profile files carry this tag; bump it if the opcode table or the
/// run semantics ever change.
inline constexpr const char* kMachineVersion = "bvm-v1";

// The reference machine. One read-only input tape, one unbounded binary work
// tape (head starts at cell 0, which counts as visited), one append-only
// output tape. Three bits per opcode; JZ/JMP take an 8-bit big-endian
// absolute instruction index.
enum class Op : std::uint8_t {
  Halt = 0b000,
  Left = 0b001,
  Right = 0b010,
  Flip = 0b011,
  Out = 0b100,
  Read = 0b101,
  Jz = 0b110,
  Jmp = 0b111,
};

struct Instruction {
  Op op;
  std::uint8_t target = 0;  // JZ/JMP only

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// A program is a raw bitstring plus its decoded instruction sequence.
/// Trailing bits that cannot complete an instruction decode as HALT.
struct Program {
  BitString raw;
  std::vector<Instruction> code;

  static Program decode(BitString raw_bits);
};

/// Decode the length-`len` program whose raw bits are the big-endian digits
/// of `value`. Equivalent to Program::decode but allocation-free: the hot
/// path for exhaustive enumeration.
void decode_program_value(std::uint64_t value, int len, std::vector<Instruction>& out);

struct RunBudget {
  int space = 1;                 // max distinct work cells ever visited
  long long step_cap = 0;        // max instructions executed
  long long output_cap = 0;      // max output bits
};

enum class Outcome { Halted, SpaceExceeded, StepsExhausted, OutputOverflow };

const char* outcome_name(Outcome o);

struct RunResult {
  Outcome outcome = Outcome::Halted;
  BitString output;       // meaningful for Halted; partial otherwise
  long long steps = 0;
  int space_used = 0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Deterministic small-step execution under the given budget. Non-halting
/// outcomes are data, not faults.
RunResult run(const Program& p, const BitString& input, const RunBudget& budget);

/// Configuration-count step bound: (n_instr+1)*(input_len+1)*(s+1)*2^s + 1.
/// Any run not otherwise stopped within this many steps has repeated a
/// configuration and will never halt. Throws BudgetTooLarge if the product
/// does not fit comfortably in 64 bits.
long long max_steps(int s, int n_instr, int input_len);

/// Reusable execution context: owns the tape and output scratch so a tight
/// enumeration loop does not allocate. Not thread-safe; use one per thread.
class Runner {
 public:
  /// Runs `code` on `input`; output is left in `output_scratch()`.
  Outcome run_code(const std::vector<Instruction>& code, const std::vector<std::uint8_t>& input,
                   const RunBudget& budget, long long* steps_out = nullptr, int* space_out = nullptr);

  const std::vector<std::uint8_t>& output_scratch() const { return output_; }

 private:
  std::vector<std::uint8_t> tape_;
  std::vector<std::uint8_t> output_;
};

}  // namespace kext
