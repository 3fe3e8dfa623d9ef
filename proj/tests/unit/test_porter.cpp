#include "decsum/porter.hpp"

#include "doctest.h"

using decsum::porter_stem;

TEST_SUITE("porter") {

TEST_CASE("canonical vectors") {
  // spot checks against the reference implementation's sample output
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("ties") == "ti");
  CHECK(porter_stem("caress") == "caress");
  CHECK(porter_stem("cats") == "cat");
  CHECK(porter_stem("feed") == "feed");
  CHECK(porter_stem("agreed") == "agre");
  CHECK(porter_stem("plastered") == "plaster");
  CHECK(porter_stem("bled") == "bled");
  CHECK(porter_stem("motoring") == "motor");
  CHECK(porter_stem("sing") == "sing");
  CHECK(porter_stem("conflated") == "conflat");
  CHECK(porter_stem("troubled") == "troubl");
  CHECK(porter_stem("sized") == "size");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("tanned") == "tan");
  CHECK(porter_stem("falling") == "fall");
  CHECK(porter_stem("hissing") == "hiss");
  CHECK(porter_stem("fizzed") == "fizz");
  CHECK(porter_stem("failing") == "fail");
  CHECK(porter_stem("filing") == "file");
  CHECK(porter_stem("happy") == "happi");
  CHECK(porter_stem("sky") == "sky");
  CHECK(porter_stem("relational") == "relat");
  CHECK(porter_stem("conditional") == "condit");
  CHECK(porter_stem("rational") == "ration");
  CHECK(porter_stem("digitizer") == "digit");
  CHECK(porter_stem("operator") == "oper");
  CHECK(porter_stem("feudalism") == "feudal");
  CHECK(porter_stem("decisiveness") == "decis");
  CHECK(porter_stem("hopefulness") == "hope");
  CHECK(porter_stem("formaliti") == "formal");
  CHECK(porter_stem("formative") == "form");
  CHECK(porter_stem("formalize") == "formal");
  CHECK(porter_stem("electriciti") == "electr");
  CHECK(porter_stem("electrical") == "electr");
  CHECK(porter_stem("hopeful") == "hope");
  CHECK(porter_stem("goodness") == "good");
  CHECK(porter_stem("revival") == "reviv");
  CHECK(porter_stem("allowance") == "allow");
  CHECK(porter_stem("inference") == "infer");
  CHECK(porter_stem("adjustable") == "adjust");
  CHECK(porter_stem("defensible") == "defens");
  CHECK(porter_stem("replacement") == "replac");
  CHECK(porter_stem("adoption") == "adopt");
  CHECK(porter_stem("communism") == "commun");
  CHECK(porter_stem("activate") == "activ");
  CHECK(porter_stem("effective") == "effect");
  CHECK(porter_stem("generalization") == "gener");
  CHECK(porter_stem("controlling") == "control");
  CHECK(porter_stem("rolling") == "roll");
  CHECK(porter_stem("probate") == "probat");
  CHECK(porter_stem("rate") == "rate");
  CHECK(porter_stem("cease") == "ceas");
}

TEST_CASE("tokens from the summarization pipeline") {
  CHECK(porter_stem("remote") == "remot");
  CHECK(porter_stem("pushbuttons") == "pushbutton");
  CHECK(porter_stem("meetings") == "meet");
  CHECK(porter_stem("decisions") == "decis");
}

TEST_CASE("short words and non-letters unchanged") {
  CHECK(porter_stem("a") == "a");
  CHECK(porter_stem("at") == "at");
  CHECK(porter_stem("x42") == "x42");
  CHECK(porter_stem("") == "");
}

}  // TEST_SUITE
