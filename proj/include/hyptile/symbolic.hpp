// Decoration sequences and their atlas-of-words hierarchies.
//
// Two families are supported: the Oxtoby-Williams Toeplitz sequences over
// r letters, and fixed points of constant-length substitutions (by default
// 1 -> 112, 2 -> 122). Both come with the level-q atlases whose words tile
// the sequence, which is what the tower systems of the tiling are built on.
#ifndef HYPTILE_SYMBOLIC_HPP
#define HYPTILE_SYMBOLIC_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hyptile/exact.hpp"

namespace hyptile {

/// A letter of the alphabet {1, ..., r}.
using Letter = int;
using Word = std::vector<Letter>;

/// Largest word or window that operations will materialize.
inline constexpr std::uint64_t kMaterializeLimit = 1'000'000;

struct ToeplitzSpec {
  int r = 2;
  /// Highest construction step that may be executed when resolving positions.
  int max_depth = 12;
};

struct SubstitutionRule {
  /// images[i - 1] is the image of letter i.
  std::vector<Word> images;

  /// 1 -> 112, 2 -> 122.
  static SubstitutionRule standard();

  int alphabet_size() const { return static_cast<int>(images.size()); }
  std::size_t image_length() const { return images.empty() ? 0 : images.front().size(); }

  /// Throws ModelError unless every image is nonempty, of a common length and
  /// written over the alphabet.
  void validate() const;
  /// validate(), plus image(1) starting with 1 and image(2) ending with 2.
  void validate_fixed_point() const;
};

using Model = std::variant<ToeplitzSpec, SubstitutionRule>;

int alphabet_size(const Model& model);
std::string model_name(const Model& model);
bool is_toeplitz(const Model& model);

// -- Toeplitz ---------------------------------------------------------------

/// The colour s_i = ((i - 1) mod r) + 1 used at construction step i.
Letter toeplitz_color(int r, int step);

/// p_0 = 3, p_{i+1} = 3^i p_i.
BigInt toeplitz_periods(const ToeplitzSpec& spec, int i);

struct DefinedLetter {
  Letter letter;
  int step;  ///< construction step that defined the position
};

/// Runs the inductive construction for position q. Throws CapError when the
/// position is still undefined after spec.max_depth steps.
DefinedLetter toeplitz_letter(const ToeplitzSpec& spec, std::int64_t q);
/// Letters q in [from, to).
Word toeplitz_window(const ToeplitzSpec& spec, std::int64_t from, std::int64_t to);

// -- Substitution -----------------------------------------------------------

Word substitution_image(const SubstitutionRule& rule, const Word& word, int iterations,
                        std::uint64_t budget = kMaterializeLimit);
/// Letter of the two-sided fixed point; q >= 0 reads the limit of S^n(1),
/// q < 0 the left-infinite limit of S^n(2) (position -1 is its last letter).
Letter substitution_letter(const SubstitutionRule& rule, std::int64_t q);
Word substitution_fixed_window(const SubstitutionRule& rule, std::int64_t from, std::int64_t to);

// -- Either model -----------------------------------------------------------

Letter sequence_letter(const Model& model, std::int64_t q);
Word sequence_window(const Model& model, std::int64_t from, std::int64_t to);

/// Length of the level-q atlas words: 1 at q = 0, then p_q (Toeplitz) or L^q.
BigInt level_length(const Model& model, int q);

/// A run of `count` consecutive level-q blocks, all equal to atlas word `child`.
struct BlockRun {
  BigInt first;
  BigInt count;
  Letter child;
};

/// Level-(q+1) word `parent` written as consecutive runs of level-q words.
std::vector<BlockRun> parent_blocks(const Model& model, int q, Letter parent);

/// Letter at offset pos of the level-q atlas word i, without materializing it.
Letter atlas_letter(const Model& model, int q, Letter i, const BigInt& pos);

struct AtlasLevel {
  int q = 0;
  BigInt length;
  /// words[i - 1] is the word indexed by letter i.
  std::vector<Word> words;
};

/// Materialized atlas; BudgetError above kMaterializeLimit letters per word.
AtlasLevel atlas_words(const Model& model, int q);

/// Atlas index of the level-q block [k L_q, (k+1) L_q) of the sequence.
Letter block_letter(const Model& model, int q, std::int64_t k);

struct Block {
  std::int64_t offset;
  Letter index;
  friend bool operator==(const Block&, const Block&) = default;
};

struct BlockDecomposition {
  int level = 0;
  std::vector<Block> blocks;
};

BlockDecomposition block_decompose(const Model& model, std::int64_t from, std::int64_t to, int q);

/// Occurrences of each letter in atlas word i of level q, computed by the
/// level recursion. Entry k counts letter k + 1.
std::vector<BigInt> letter_counts(const Model& model, int q, Letter i);

/// Digits when r <= 9, comma separated otherwise.
std::string format_word(const Word& word, int r);

}  // namespace hyptile

#endif  // HYPTILE_SYMBOLIC_HPP
