#include "kext/machine.hpp"

#include <algorithm>

#include "kext/errors.hpp"

namespace kext {

Program Program::decode(BitString raw_bits) {
  Program p;
  p.raw = std::move(raw_bits);
  const BitString& raw = p.raw;
  int i = 0;
  while (i < raw.size()) {
    if (i + 3 > raw.size()) {
      p.code.push_back({Op::Halt});
      break;
    }
    auto op = static_cast<Op>((raw.bit(i) << 2) | (raw.bit(i + 1) << 1) | raw.bit(i + 2));
    i += 3;
    if (op == Op::Jz || op == Op::Jmp) {
      if (i + 8 > raw.size()) {
        p.code.push_back({Op::Halt});
        break;
      }
      std::uint8_t target = 0;
      for (int j = 0; j < 8; ++j) target = static_cast<std::uint8_t>((target << 1) | raw.bit(i + j));
      i += 8;
      p.code.push_back({op, target});
    } else {
      p.code.push_back({op});
    }
  }
  return p;
}

void decode_program_value(std::uint64_t value, int len, std::vector<Instruction>& out) {
  out.clear();
  int i = 0;
  while (i < len) {
    if (i + 3 > len) {
      out.push_back({Op::Halt});
      return;
    }
    auto op = static_cast<Op>((value >> (len - i - 3)) & 0b111);
    i += 3;
    if (op == Op::Jz || op == Op::Jmp) {
      if (i + 8 > len) {
        out.push_back({Op::Halt});
        return;
      }
      auto target = static_cast<std::uint8_t>((value >> (len - i - 8)) & 0xff);
      i += 8;
      out.push_back({op, target});
    } else {
      out.push_back({op});
    }
  }
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Halted: return "halted";
    case Outcome::SpaceExceeded: return "space_exceeded";
    case Outcome::StepsExhausted: return "steps_exhausted";
    case Outcome::OutputOverflow: return "output_overflow";
  }
  return "?";
}

long long max_steps(int s, int n_instr, int input_len) {
  if (s < 1) throw BudgetTooLarge("max_steps: requires s >= 1");
  if (s > 40) throw BudgetTooLarge("max_steps: space bound too large for the step formula");
  unsigned __int128 prod = static_cast<unsigned __int128>(n_instr + 1) * (input_len + 1);
  prod *= static_cast<unsigned __int128>(s + 1);
  prod <<= s;
  prod += 1;
  if (prod > (static_cast<unsigned __int128>(1) << 62))
    throw BudgetTooLarge("max_steps: configuration bound exceeds 2^62");
  return static_cast<long long>(prod);
}

Outcome Runner::run_code(const std::vector<Instruction>& code, const std::vector<std::uint8_t>& input,
                         const RunBudget& budget, long long* steps_out, int* space_out) {
  // Unit head moves from cell 0 keep the visited set an interval, so the
  // tape fits in a [-space, +space] window around the origin.
  const int s = budget.space;
  const int window = std::max(s, 1);
  tape_.assign(static_cast<std::size_t>(2 * window + 3), 0);
  output_.clear();
  const int origin = window + 1;
  int head = origin;
  int lo = origin, hi = origin;  // visited interval
  int pc = 0;
  std::size_t in_pos = 0;
  long long steps = 0;
  auto finish = [&](Outcome o) {
    if (steps_out) *steps_out = steps;
    if (space_out) *space_out = hi - lo + 1;
    return o;
  };

  if (s < 1) return finish(Outcome::SpaceExceeded);  // cell 0 is visited from the start

  const int n_instr = static_cast<int>(code.size());
  while (pc < n_instr) {
    if (steps >= budget.step_cap) return finish(Outcome::StepsExhausted);
    const Instruction& ins = code[static_cast<std::size_t>(pc)];
    ++steps;
    switch (ins.op) {
      case Op::Halt:
        return finish(Outcome::Halted);
      case Op::Left:
        --head;
        if (head < lo) {
          if (hi - head + 1 > s) return finish(Outcome::SpaceExceeded);
          lo = head;
        }
        ++pc;
        break;
      case Op::Right:
        ++head;
        if (head > hi) {
          if (head - lo + 1 > s) return finish(Outcome::SpaceExceeded);
          hi = head;
        }
        ++pc;
        break;
      case Op::Flip:
        tape_[static_cast<std::size_t>(head)] ^= 1;
        ++pc;
        break;
      case Op::Out:
        if (static_cast<long long>(output_.size()) >= budget.output_cap)
          return finish(Outcome::OutputOverflow);
        output_.push_back(tape_[static_cast<std::size_t>(head)]);
        ++pc;
        break;
      case Op::Read:
        if (in_pos < input.size()) {
          tape_[static_cast<std::size_t>(head)] = input[in_pos];
          ++in_pos;
        } else {
          tape_[static_cast<std::size_t>(head)] = 0;
        }
        ++pc;
        break;
      case Op::Jz:
        pc = tape_[static_cast<std::size_t>(head)] == 0 ? ins.target : pc + 1;
        break;
      case Op::Jmp:
        pc = ins.target;
        break;
    }
  }
  return finish(Outcome::Halted);  // program counter past the last instruction
}

RunResult run(const Program& p, const BitString& input, const RunBudget& budget) {
  Runner runner;
  RunResult r;
  r.outcome = runner.run_code(p.code, input.bits(), budget, &r.steps, &r.space_used);
  r.output.bits() = runner.output_scratch();
  return r;
}

}  // namespace kext
