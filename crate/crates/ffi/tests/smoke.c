#include <stdio.h>
#include <string.h>

#include "pboxposs.h"

#define CHECK(call)                                                        \
  do {                                                                     \
    PbpStatus s_ = (call);                                                 \
    if (s_ != PBP_STATUS_OK) {                                             \
      fprintf(stderr, "%s failed (%d): %s\n", #call, s_, pbp_last_error()); \
      return 1;                                                            \
    }                                                                      \
  } while (0)

int main(void) {
  const char *doc =
      "{\"classes\":[[\"a\"],[\"b\"],[\"c\"]],"
      "\"lower\":[\"0\",\"0\",\"1\"],\"upper\":[\"1/2\",\"4/5\",\"1\"]}";
  PbpPBox *p = NULL;
  char *upper = NULL;
  bool maxitive = false;
  PbpPossDist *pi = NULL;
  char *json = NULL;

  CHECK(pbp_pbox_from_json(doc, &p));
  CHECK(pbp_pbox_upper(p, "a,c", &upper));
  CHECK(pbp_pbox_is_maxitive(p, &maxitive));
  CHECK(pbp_pbox_to_possibility(p, &pi));
  CHECK(pbp_possibility_to_json(pi, &json));
  printf("upper=%s maxitive=%d %s\n", upper, maxitive, json);

  if (pbp_pbox_upper(p, "zz", &upper) != PBP_STATUS_INVALID_ARGUMENT) {
    return 1;
  }
  printf("error=%s\n", pbp_last_error());

  pbp_string_free(upper);
  pbp_string_free(json);
  pbp_possibility_free(pi);
  pbp_pbox_free(p);
  return 0;
}
