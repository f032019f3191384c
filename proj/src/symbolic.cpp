#include "hyptile/symbolic.hpp"

#include <array>
#include <limits>
#include <map>
#include <sstream>

#include "hyptile/errors.hpp"

namespace hyptile {

namespace {

// p_i for i = 0..9; p_10 no longer fits in 64 bits.
constexpr int kPeriodTable = 10;

constexpr std::array<std::int64_t, kPeriodTable> make_periods() {
  std::array<std::int64_t, kPeriodTable> p{};
  p[0] = 3;
  std::int64_t three_i = 1;
  for (int i = 0; i + 1 < kPeriodTable; ++i) {
    p[i + 1] = three_i * p[i];
    three_i *= 3;
  }
  return p;
}

constexpr auto kPeriods = make_periods();

std::int64_t int_pow3(int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= 3;
  return r;
}

void check_window(std::int64_t from, std::int64_t to) {
  if (to <= from) throw DomainError("window must contain at least one position");
  if (static_cast<std::uint64_t>(to - from) > kMaterializeLimit)
    throw BudgetError("window of " + std::to_string(to - from) + " letters exceeds the materialization limit");
}

std::uint64_t to_u64(const BigInt& n) { return n.convert_to<std::uint64_t>(); }

}  // namespace

// -- SubstitutionRule -------------------------------------------------------

SubstitutionRule SubstitutionRule::standard() { return SubstitutionRule{{{1, 1, 2}, {1, 2, 2}}}; }

void SubstitutionRule::validate() const {
  if (images.empty()) throw ModelError("substitution has no letters");
  const auto len = images.front().size();
  if (len == 0) throw ModelError("substitution images must be nonempty");
  const int r = alphabet_size();
  for (const auto& img : images) {
    if (img.size() != len) throw ModelError("substitution images must have a common length");
    for (Letter c : img)
      if (c < 1 || c > r) throw ModelError("substitution image uses a letter outside the alphabet");
  }
}

void SubstitutionRule::validate_fixed_point() const {
  validate();
  if (alphabet_size() < 2) throw ModelError("two-sided fixed point needs letters 1 and 2");
  if (images[0].front() != 1) throw ModelError("image(1) must start with 1 for the right limit to exist");
  if (images[1].back() != 2) throw ModelError("image(2) must end with 2 for the left limit to exist");
  if (image_length() < 2) throw ModelError("substitution images must have length at least 2");
}

// -- Model helpers ----------------------------------------------------------

int alphabet_size(const Model& model) {
  if (const auto* t = std::get_if<ToeplitzSpec>(&model)) return t->r;
  return std::get<SubstitutionRule>(model).alphabet_size();
}

std::string model_name(const Model& model) {
  if (const auto* t = std::get_if<ToeplitzSpec>(&model)) return "toeplitz(r=" + std::to_string(t->r) + ")";
  return "substitution";
}

bool is_toeplitz(const Model& model) { return std::holds_alternative<ToeplitzSpec>(model); }

// -- Toeplitz ---------------------------------------------------------------

Letter toeplitz_color(int r, int step) { return static_cast<Letter>(floor_mod(step - 1, r) + 1); }

BigInt toeplitz_periods(const ToeplitzSpec& spec, int i) {
  if (i < 0) throw DomainError("period index must be nonnegative");
  if (i > spec.max_depth)
    throw CapError("period index " + std::to_string(i) + " exceeds max_depth " + std::to_string(spec.max_depth),
                   i, spec.max_depth + 1);
  BigInt p = 3;
  for (int k = 0; k < i; ++k) p *= pow3(static_cast<std::uint64_t>(k));
  return p;
}

DefinedLetter toeplitz_letter(const ToeplitzSpec& spec, std::int64_t q) {
  if (spec.r < 1) throw ModelError("alphabet size must be at least 1");
  auto cap = [&](int step) {
    return CapError("position " + std::to_string(q) + " undefined after " + std::to_string(spec.max_depth) +
                        " steps (first undefined step " + std::to_string(step) + ")",
                    q, step);
  };
  if (spec.max_depth < 1) throw cap(1);

  // Step 1: residues 0 and -1 modulo p_1.
  const auto m = floor_mod(q, kPeriods[1]);
  if (m == 0 || m == kPeriods[1] - 1) return {toeplitz_color(spec.r, 1), 1};

  // Step i+1: undefined positions of p_i-blocks k = 0 or -1 (mod 3^i).
  for (int i = 1;; ++i) {
    const int step = i + 1;
    if (step > spec.max_depth) throw cap(step);
    if (i >= kPeriodTable) return {toeplitz_color(spec.r, step), step};  // k is 0 or -1
    const std::int64_t k = floor_div(q, kPeriods[i]);
    const std::int64_t modulus = int_pow3(i);
    const std::int64_t km = floor_mod(k, modulus);
    if (km == 0 || km == modulus - 1) return {toeplitz_color(spec.r, step), step};
  }
}

Word toeplitz_window(const ToeplitzSpec& spec, std::int64_t from, std::int64_t to) {
  check_window(from, to);
  Word out;
  out.reserve(static_cast<std::size_t>(to - from));
  for (std::int64_t q = from; q < to; ++q) out.push_back(toeplitz_letter(spec, q).letter);
  return out;
}

// -- Substitution -----------------------------------------------------------

Word substitution_image(const SubstitutionRule& rule, const Word& word, int iterations, std::uint64_t budget) {
  rule.validate();
  if (iterations < 0) throw DomainError("iteration count must be nonnegative");
  const int r = rule.alphabet_size();
  for (Letter c : word)
    if (c < 1 || c > r) throw DomainError("word uses a letter outside the alphabet");
  BigInt size = BigInt(word.size()) * ipow(BigInt(rule.image_length()), static_cast<std::uint64_t>(iterations));
  if (size > budget) throw BudgetError("substitution image of " + size.str() + " letters exceeds the budget");
  Word current = word;
  for (int n = 0; n < iterations; ++n) {
    Word next;
    next.reserve(current.size() * rule.image_length());
    for (Letter c : current) {
      const auto& img = rule.images[static_cast<std::size_t>(c - 1)];
      next.insert(next.end(), img.begin(), img.end());
    }
    current = std::move(next);
  }
  return current;
}

Letter substitution_letter(const SubstitutionRule& rule, std::int64_t q) {
  rule.validate_fixed_point();
  const auto len = static_cast<std::uint64_t>(rule.image_length());
  // Offset inside S^n(seed) with len^n > offset.
  Letter current = 1;
  std::uint64_t offset = 0;
  if (q >= 0) {
    offset = static_cast<std::uint64_t>(q);
  } else {
    current = 2;
    offset = static_cast<std::uint64_t>(-(q + 1));
  }
  std::vector<std::uint64_t> digits;
  for (std::uint64_t v = offset; v > 0; v /= len) digits.push_back(v % len);
  if (digits.empty()) digits.push_back(0);
  if (q < 0)
    for (auto& d : digits) d = len - 1 - d;  // count from the right end
  for (auto it = digits.rbegin(); it != digits.rend(); ++it)
    current = rule.images[static_cast<std::size_t>(current - 1)][*it];
  return current;
}

Word substitution_fixed_window(const SubstitutionRule& rule, std::int64_t from, std::int64_t to) {
  rule.validate_fixed_point();
  check_window(from, to);
  Word out;
  out.reserve(static_cast<std::size_t>(to - from));
  for (std::int64_t q = from; q < to; ++q) out.push_back(substitution_letter(rule, q));
  return out;
}

// -- Either model -----------------------------------------------------------

Letter sequence_letter(const Model& model, std::int64_t q) {
  if (const auto* t = std::get_if<ToeplitzSpec>(&model)) return toeplitz_letter(*t, q).letter;
  return substitution_letter(std::get<SubstitutionRule>(model), q);
}

Word sequence_window(const Model& model, std::int64_t from, std::int64_t to) {
  if (const auto* t = std::get_if<ToeplitzSpec>(&model)) return toeplitz_window(*t, from, to);
  return substitution_fixed_window(std::get<SubstitutionRule>(model), from, to);
}

BigInt level_length(const Model& model, int q) {
  if (q < 0) throw DomainError("level must be nonnegative");
  if (q == 0) return 1;
  if (is_toeplitz(model)) {
    BigInt p = 3;
    for (int k = 0; k < q; ++k) p *= pow3(static_cast<std::uint64_t>(k));
    return p;
  }
  const auto& rule = std::get<SubstitutionRule>(model);
  return ipow(BigInt(rule.image_length()), static_cast<std::uint64_t>(q));
}

std::vector<BlockRun> parent_blocks(const Model& model, int q, Letter parent) {
  const int r = alphabet_size(model);
  if (q < 0) throw DomainError("level must be nonnegative");
  if (parent < 1 || parent > r) throw DomainError("parent letter outside the alphabet");
  if (const auto* t = std::get_if<ToeplitzSpec>(&model)) {
    // Level 1 words are s_1 i s_1; level q+1 words are P X^(3^q - 2) P with P = p_{q, s_{q+1}}.
    const Letter border = toeplitz_color(t->r, q + 1);
    const BigInt blocks = q == 0 ? BigInt(3) : pow3(static_cast<std::uint64_t>(q));
    return {BlockRun{0, 1, border}, BlockRun{1, blocks - 2, parent}, BlockRun{blocks - 1, 1, border}};
  }
  const auto& rule = std::get<SubstitutionRule>(model);
  rule.validate();
  std::vector<BlockRun> runs;
  const auto& img = rule.images[static_cast<std::size_t>(parent - 1)];
  for (std::size_t k = 0; k < img.size(); ++k) {
    if (!runs.empty() && runs.back().child == img[k]) {
      runs.back().count += 1;
    } else {
      runs.push_back(BlockRun{BigInt(k), 1, img[k]});
    }
  }
  return runs;
}

Letter atlas_letter(const Model& model, int q, Letter i, const BigInt& pos) {
  if (pos < 0 || pos >= level_length(model, q)) throw DomainError("offset outside the atlas word");
  BigInt offset = pos;
  Letter current = i;
  for (int level = q; level > 0; --level) {
    const BigInt child_len = level_length(model, level - 1);
    const BigInt block = offset / child_len;
    offset -= block * child_len;
    for (const auto& run : parent_blocks(model, level - 1, current)) {
      if (block >= run.first && block < run.first + run.count) {
        current = run.child;
        break;
      }
    }
  }
  return current;
}

AtlasLevel atlas_words(const Model& model, int q) {
  const int r = alphabet_size(model);
  const BigInt length = level_length(model, q);
  if (length > kMaterializeLimit)
    throw BudgetError("level-" + std::to_string(q) + " atlas words have " + length.str() +
                      " letters, above the materialization limit");
  std::vector<Word> words(static_cast<std::size_t>(r));
  for (int i = 1; i <= r; ++i) words[static_cast<std::size_t>(i - 1)] = Word{i};
  for (int level = 0; level < q; ++level) {
    std::vector<Word> next(static_cast<std::size_t>(r));
    for (int j = 1; j <= r; ++j) {
      Word& out = next[static_cast<std::size_t>(j - 1)];
      for (const auto& run : parent_blocks(model, level, j)) {
        const auto& child = words[static_cast<std::size_t>(run.child - 1)];
        for (std::uint64_t c = 0; c < to_u64(run.count); ++c) out.insert(out.end(), child.begin(), child.end());
      }
    }
    words = std::move(next);
  }
  return AtlasLevel{q, length, std::move(words)};
}

Letter block_letter(const Model& model, int q, std::int64_t k) {
  if (q == 0) return sequence_letter(model, k);
  if (const auto* t = std::get_if<ToeplitzSpec>(&model)) {
    // The positions still undefined after step q sit at the same offsets in
    // every p_q-block and are all filled with the block's index letter.
    BigInt first_free = 1;  // offset of the first such position, level 1
    for (int level = 1; level < q; ++level) first_free += level_length(model, level);
    const BigInt pos = BigInt(k) * level_length(model, q) + first_free;
    if (pos > std::numeric_limits<std::int64_t>::max() || pos < std::numeric_limits<std::int64_t>::min())
      throw BudgetError("block position exceeds the 64-bit sequence range");
    return toeplitz_letter(*t, pos.convert_to<std::int64_t>()).letter;
  }
  // S^q(w_k) is the k-th level-q block of the fixed point.
  return substitution_letter(std::get<SubstitutionRule>(model), k);
}

BlockDecomposition block_decompose(const Model& model, std::int64_t from, std::int64_t to, int q) {
  const BigInt length = level_length(model, q);
  if (length > kMaterializeLimit) throw BudgetError("level-q words are too long to decompose explicitly");
  const auto len = length.convert_to<std::int64_t>();
  if (floor_mod(from, len) != 0 || floor_mod(to, len) != 0)
    throw AlignmentError("window [" + std::to_string(from) + ", " + std::to_string(to) +
                         ") is not aligned to level-" + std::to_string(q) + " blocks of length " +
                         std::to_string(len));
  const Word window = sequence_window(model, from, to);
  const AtlasLevel atlas = atlas_words(model, q);
  std::map<Word, Letter> index;
  for (std::size_t i = 0; i < atlas.words.size(); ++i) index.emplace(atlas.words[i], static_cast<Letter>(i + 1));

  BlockDecomposition out{q, {}};
  for (std::int64_t off = from; off < to; off += len) {
    const auto begin = window.begin() + (off - from);
    Word block(begin, begin + len);
    auto it = index.find(block);
    if (it == index.end())
      throw ModelError("block at offset " + std::to_string(off) + " matches no level-" + std::to_string(q) +
                       " atlas word");
    out.blocks.push_back(Block{off, it->second});
  }
  return out;
}

std::vector<BigInt> letter_counts(const Model& model, int q, Letter i) {
  const int r = alphabet_size(model);
  if (q < 0) throw DomainError("level must be nonnegative");
  if (i < 1 || i > r) throw DomainError("atlas index outside the alphabet");
  std::vector<std::vector<BigInt>> counts(static_cast<std::size_t>(r), std::vector<BigInt>(static_cast<std::size_t>(r), 0));
  for (int k = 0; k < r; ++k) counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1;
  for (int level = 0; level < q; ++level) {
    std::vector<std::vector<BigInt>> next(static_cast<std::size_t>(r), std::vector<BigInt>(static_cast<std::size_t>(r), 0));
    for (int j = 1; j <= r; ++j) {
      auto& out = next[static_cast<std::size_t>(j - 1)];
      for (const auto& run : parent_blocks(model, level, j)) {
        const auto& child = counts[static_cast<std::size_t>(run.child - 1)];
        for (int k = 0; k < r; ++k) out[static_cast<std::size_t>(k)] += run.count * child[static_cast<std::size_t>(k)];
      }
    }
    counts = std::move(next);
  }
  return counts[static_cast<std::size_t>(i - 1)];
}

std::string format_word(const Word& word, int r) {
  std::ostringstream os;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (r > 9 && k > 0) os << ',';
    os << word[k];
  }
  return os.str();
}

}  // namespace hyptile
