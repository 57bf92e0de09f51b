#pragma once

#include "tweetsent/corpus.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/features.hpp"
#include "tweetsent/io.hpp"
#include "tweetsent/label.hpp"
#include "tweetsent/lexicon.hpp"
#include "tweetsent/metrics.hpp"
#include "tweetsent/naive_bayes.hpp"
#include "tweetsent/neural.hpp"
#include "tweetsent/pipeline.hpp"
#include "tweetsent/porter.hpp"
#include "tweetsent/random.hpp"
#include "tweetsent/report.hpp"
#include "tweetsent/textprep.hpp"
#include "tweetsent/utf8.hpp"
