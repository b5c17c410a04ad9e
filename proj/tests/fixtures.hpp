// Shared fixtures: the worked examples used across the test suites, with
// their sentences and tokenized logical forms exactly as the dataset files
// would spell them.
#pragma once

#include <string>
#include <vector>

#include "amcogs/strings.hpp"

namespace fixtures {

struct Example {
  std::string sentence;
  std::string compact;    // compact spelling
  std::string tokenized;  // dataset spelling
};

// "The boy wanted to go."
inline Example boyWanted() {
  return {
      "The boy wanted to go",
      "*boy(x_1); want.agent(x_2,x_1) AND want.xcomp(x_2,x_4) AND go.agent(x_4,x_1)",
      "* boy ( x _ 1 ) ; want . agent ( x _ 2 , x _ 1 ) AND want . xcomp ( x _ 2 "
      ", x _ 4 ) AND go . agent ( x _ 4 , x _ 1 )"};
}

// "Ava was lended a cookie in a bottle."
inline Example lendedCookie() {
  return {
      "Ava was lended a cookie in a bottle",
      "lend.recipient(x_2,Ava) AND lend.theme(x_2,x_4) AND cookie(x_4) AND "
      "cookie.nmod.in(x_4,x_7) AND bottle(x_7)",
      "lend . recipient ( x _ 2 , Ava ) AND lend . theme ( x _ 2 , x _ 4 ) AND "
      "cookie ( x _ 4 ) AND cookie . nmod . in ( x _ 4 , x _ 7 ) AND bottle ( x _ 7 )"};
}

// "Ava said that Ben declared that Claire slept."
inline Example cpRecursion() {
  return {
      "Ava said that Ben declared that Claire slept",
      "say.agent(x_1,Ava) AND say.ccomp(x_1,x_4) AND declare.agent(x_4,Ben) AND "
      "declare.ccomp(x_4,x_7) AND sleep.agent(x_7,Claire)",
      "say . agent ( x _ 1 , Ava ) AND say . ccomp ( x _ 1 , x _ 4 ) AND declare "
      ". agent ( x _ 4 , Ben ) AND declare . ccomp ( x _ 4 , x _ 7 ) AND sleep . "
      "agent ( x _ 7 , Claire )"};
}

// The "touch" primitive.
inline Example touchPrimitive() {
  return {"touch",
          "LAMBDA a. LAMBDA b. LAMBDA e. touch.agent(e,b) AND touch.theme(e,a)",
          "LAMBDA a . LAMBDA b . LAMBDA e . touch . agent ( e , b ) AND touch . "
          "theme ( e , a )"};
}

// "Ava saw a ball in a bowl on the table."
inline Example sawBall() {
  return {
      "Ava saw a ball in a bowl on the table",
      "*table(x_9); see.agent(x_1,Ava) AND see.theme(x_1,x_3) AND ball(x_3) AND "
      "ball.nmod.in(x_3,x_6) AND bowl(x_6) AND bowl.nmod.on(x_6,x_9)",
      "* table ( x _ 9 ) ; see . agent ( x _ 1 , Ava ) AND see . theme ( x _ 1 , "
      "x _ 3 ) AND ball ( x _ 3 ) AND ball . nmod . in ( x _ 3 , x _ 6 ) AND bowl "
      "( x _ 6 ) AND bowl . nmod . on ( x _ 6 , x _ 9 )"};
}

// "The baby on a tray in the house screamed." plus the two system outputs
// discussed alongside it.
inline Example babyTray() {
  return {
      "The baby on a tray in the house screamed",
      "*baby(x_1); *house(x_7); baby.nmod.on(x_1,x_4) AND tray(x_4) AND "
      "tray.nmod.in(x_4,x_7) AND scream.agent(x_8,x_1)",
      "* baby ( x _ 1 ) ; * house ( x _ 7 ) ; baby . nmod . on ( x _ 1 , x _ 4 ) "
      "AND tray ( x _ 4 ) AND tray . nmod . in ( x _ 4 , x _ 7 ) AND scream . "
      "agent ( x _ 8 , x _ 1 )"};
}

inline std::string babyTrayBartOutput() {
  return "* baby ( x _ 1 ) ; * house ( x _ 7 ) ; scream . agent ( x _ 2 , x _ 1 "
         ") AND scream . theme ( x _ 2 , x _ 4 ) AND tray ( x _ 4 ) AND tray . "
         "nmod . in ( x _ 4 , x _ 7 )";
}

inline std::string babyTrayAmOutput() {
  return "* baby ( x _ 1 ) ; * house ( x _ 7 ) ; baby . nmod . on ( x _ 1 , x _ "
         "4 ) AND tray ( x _ 4 ) AND tray . nmod . in ( x _ 4 , x _ 8 ) AND "
         "scream . agent ( x _ 8 , x _ 7 )";
}

inline std::vector<std::string> tokens(const Example& e) {
  return amcogs::splitWhitespace(e.sentence);
}

}  // namespace fixtures
