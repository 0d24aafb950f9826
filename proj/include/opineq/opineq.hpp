#pragma once

#include "opineq/error.hpp"
#include "opineq/spectral.hpp"
#include "opineq/symbols.hpp"
#include "opineq/truncation.hpp"
#include "opineq/hlp.hpp"
#include "opineq/stechkin.hpp"
#include "opineq/classes.hpp"
#include "opineq/recovery.hpp"
#include "opineq/io.hpp"
