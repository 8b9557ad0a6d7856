#pragma once

#include "smtmc/bignum.hpp"
#include "smtmc/bvformula.hpp"
#include "smtmc/compile.hpp"
#include "smtmc/corpus.hpp"
#include "smtmc/counter.hpp"
#include "smtmc/error.hpp"
#include "smtmc/hashfamily.hpp"
#include "smtmc/modmath.hpp"
#include "smtmc/normalize.hpp"
#include "smtmc/oracle.hpp"
#include "smtmc/parser.hpp"
#include "smtmc/printer.hpp"
#include "smtmc/validate.hpp"
