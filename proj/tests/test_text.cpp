#include <gtest/gtest.h>

#include "arcscale/text.hpp"

using arcscale::count_code_points;
using arcscale::find_invalid_utf8;
using arcscale::fold_case;
using arcscale::tokenize;
using Tokens = std::vector<std::string>;

TEST(Tokenize, StripsPunctuationAndLowercases) {
  EXPECT_EQ(tokenize("The Ugly Duckling!"), (Tokens{"the", "ugly", "duckling"}));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, KeepsInternalApostrophes) {
  EXPECT_EQ(tokenize("don't stop"), (Tokens{"don't", "stop"}));
}

TEST(Tokenize, DropsLeadingAndTrailingApostrophes) {
  EXPECT_EQ(tokenize("'tis the sailors' song"), (Tokens{"tis", "the", "sailors", "song"}));
  EXPECT_EQ(tokenize("rock''n roll"), (Tokens{"rock", "n", "roll"}));
}

TEST(Tokenize, CurlyApostropheBecomesAscii) {
  EXPECT_EQ(tokenize("It\xE2\x80\x99s fine"), (Tokens{"it's", "fine"}));
}

TEST(Tokenize, DigitsAndSymbolsSeparate) {
  EXPECT_EQ(tokenize("chapter12page--3 \xE2\x80\x94 end"), (Tokens{"chapter", "page", "end"}));
}

TEST(Tokenize, AccentedLettersStayInTokens) {
  EXPECT_EQ(tokenize("CAF\xC3\x89 na\xC3\xafve"), (Tokens{"caf\xC3\xA9", "na\xC3\xAFve"}));
}

TEST(FoldCase, LatinGreekCyrillic) {
  EXPECT_EQ(fold_case("\xC3\x85NGSTR\xC3\x96M"), "\xC3\xA5ngstr\xC3\xB6m");
  EXPECT_EQ(fold_case("\xCE\xA3\xCE\x9F\xCE\xA6"), "\xCF\x83\xCE\xBF\xCF\x86");  // ΣΟΦ
  EXPECT_EQ(fold_case("\xD0\x9C\xD0\x98\xD0\xA0"), "\xD0\xBC\xD0\xB8\xD1\x80");  // МИР
  EXPECT_EQ(fold_case("already lower"), "already lower");
}

TEST(Utf8, DetectsInvalidSequences) {
  EXPECT_FALSE(find_invalid_utf8("plain ascii").has_value());
  EXPECT_FALSE(find_invalid_utf8("\xE2\x80\x99").has_value());
  EXPECT_EQ(find_invalid_utf8("ok\xFFno"), 2u);
  EXPECT_EQ(find_invalid_utf8("\xC0\xAF"), 0u);          // overlong '/'
  EXPECT_EQ(find_invalid_utf8("ab\xED\xA0\x80"), 2u);    // surrogate
  EXPECT_EQ(find_invalid_utf8("\xE2\x80"), 0u);          // truncated
}

TEST(Utf8, CountsCodePoints) {
  EXPECT_EQ(count_code_points(""), 0u);
  EXPECT_EQ(count_code_points("abc"), 3u);
  EXPECT_EQ(count_code_points("caf\xC3\xA9"), 4u);
}
