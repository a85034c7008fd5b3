#ifndef RKD_WORDS_HPP
#define RKD_WORDS_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rkd
{

/// Hard cap on word length and on the depth of any function space.
inline constexpr int max_length = 24;

class WordError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

///
/// Finite binary word w_1 ... w_l. Symbols are packed into the low `length`
/// bits of `bits` with w_1 in the most significant position, so the word
/// `10` has bits 0b10 and the children of a cylinder [w] at index i are the
/// contiguous pair {2i, 2i+1}.
///
class Word
{
public:
    constexpr Word() = default;

    constexpr Word(int length, std::uint32_t bits) : length_(length), bits_(bits)
    {
        if (length < 0 || length > max_length)
        {
            throw WordError("word length out of range: " + std::to_string(length));
        }
        if (length < 32 && (bits >> length) != 0)
        {
            throw WordError("word bits exceed length");
        }
    }

    static constexpr Word empty() { return Word{}; }

    /// Parses a string over {0,1}; "" and "eps" give the empty word.
    static Word parse(std::string_view text)
    {
        if (text == "eps")
        {
            return Word{};
        }
        if (text.size() > static_cast<std::size_t>(max_length))
        {
            throw WordError("word too long: " + std::string(text));
        }
        std::uint32_t bits = 0;
        for (char ch : text)
        {
            if (ch != '0' && ch != '1')
            {
                throw WordError("invalid symbol in word: " + std::string(text));
            }
            bits = (bits << 1) | static_cast<std::uint32_t>(ch - '0');
        }
        return Word(static_cast<int>(text.size()), bits);
    }

    constexpr int length() const { return length_; }
    constexpr std::uint32_t bits() const { return bits_; }
    constexpr bool is_empty() const { return length_ == 0; }

    /// Symbol at 1-based position i.
    constexpr int symbol(int i) const
    {
        if (i < 1 || i > length_)
        {
            throw WordError("symbol position out of range");
        }
        return static_cast<int>((bits_ >> (length_ - i)) & 1u);
    }

    constexpr int first() const { return symbol(1); }

    /// Restriction to the first n symbols.
    constexpr Word prefix(int n) const
    {
        if (n < 0 || n > length_)
        {
            throw WordError("prefix length out of range");
        }
        return Word(n, n == 0 ? 0u : bits_ >> (length_ - n));
    }

    /// Concatenation uv.
    constexpr Word concat(Word v) const
    {
        if (length_ + v.length_ > max_length)
        {
            throw WordError("length cap exceeded in concatenation");
        }
        return Word(length_ + v.length_, (bits_ << v.length_) | v.bits_);
    }

    /// Appends one symbol on the right (w -> wa).
    constexpr Word append(int a) const { return concat(Word(1, static_cast<std::uint32_t>(a & 1))); }

    std::string str() const
    {
        std::string out(static_cast<std::size_t>(length_), '0');
        for (int i = 0; i < length_; ++i)
        {
            if ((bits_ >> (length_ - 1 - i)) & 1u)
            {
                out[static_cast<std::size_t>(i)] = '1';
            }
        }
        return out;
    }

    /// JSON-key form: the empty word is written "eps".
    std::string key() const { return is_empty() ? std::string("eps") : str(); }

    friend constexpr bool operator==(Word, Word) = default;

    /// Shortlex order: by length, then lexicographically.
    friend constexpr std::strong_ordering operator<=>(Word a, Word b)
    {
        if (auto c = a.length_ <=> b.length_; c != 0)
        {
            return c;
        }
        return a.bits_ <=> b.bits_;
    }

private:
    int length_ = 0;
    std::uint32_t bits_ = 0;
};

/// sigma(w_1 w_2 ... w_l) = w_2 ... w_l.
constexpr Word shift(Word w)
{
    if (w.is_empty())
    {
        throw WordError("cannot shift ε");
    }
    const int l = w.length() - 1;
    return Word(l, l == 0 ? 0u : (w.bits() & ((1u << l) - 1u)));
}

/// aw for a symbol a in {0,1}.
constexpr Word prepend(int a, Word w)
{
    if (a != 0 && a != 1)
    {
        throw WordError("symbol must be 0 or 1");
    }
    if (w.length() >= max_length)
    {
        throw WordError("length cap exceeded in prepend");
    }
    return Word(w.length() + 1, (static_cast<std::uint32_t>(a) << w.length()) | w.bits());
}

constexpr bool is_prefix(Word u, Word v)
{
    return u.length() <= v.length() && v.prefix(u.length()) == u;
}

constexpr std::uint32_t word_index(Word w) { return w.bits(); }

constexpr Word index_word(int depth, std::uint64_t i)
{
    if (depth < 0 || depth > max_length)
    {
        throw WordError("depth out of range");
    }
    if (i >= (std::uint64_t{1} << depth))
    {
        throw WordError("index out of range for depth " + std::to_string(depth));
    }
    return Word(depth, static_cast<std::uint32_t>(i));
}

/// Index into the basis {e_eps^0, e_eps^1} ∪ {e_w : l(w) >= 1}.
struct HaarIndex
{
    enum class Tag
    {
        Eps0,
        Eps1,
        Wordic
    };

    Tag tag = Tag::Eps0;
    Word word{};

    static HaarIndex eps0() { return {Tag::Eps0, Word{}}; }
    static HaarIndex eps1() { return {Tag::Eps1, Word{}}; }
    static HaarIndex of(Word w)
    {
        if (w.is_empty())
        {
            throw WordError("Haar word index must be nonempty");
        }
        return {Tag::Wordic, w};
    }

    friend bool operator==(const HaarIndex&, const HaarIndex&) = default;
};

}  // namespace rkd

#endif
