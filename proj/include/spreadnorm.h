#ifndef SPREADNORM_H
#define SPREADNORM_H

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; they double as CLI exit codes. */
enum {
    SN_OK = 0,
    SN_CHECK_FAILED = 1, /* report produced, but a checked inequality or recheck failed */
    SN_ERR_INVALID = 2,  /* malformed JSON, schema violation, bad parameters */
    SN_ERR_CAP = 3       /* a computational cap was exceeded */
};

typedef struct sn_space sn_space;

/* All JSON in and out is UTF-8 text. Output strings are released with sn_string_free. */
int sn_space_new(const char* spec_json, sn_space** out);
void sn_space_free(sn_space* space);
const char* sn_space_kind(const sn_space* space);

/* opts: {"recheck": bool, "seminorm": i} or NULL */
int sn_norm(const sn_space* space, const char* vector_json, const char* opts_json, char** report);

int sn_verify(const char* check, const char* params_json, char** report);
int sn_sm_growth(const sn_space* space, const char* params_json, char** report);
int sn_sm_estimate(const sn_space* space, const char* params_json, char** report);
int sn_dominate(const sn_space* a, const sn_space* b, const char* params_json, char** report);
int sn_dbasis(const sn_space* a, const sn_space* b, const char* params_json, char** report);
int sn_krivine(const sn_space* space, const char* params_json, char** report);
/* action: "certify", "apply" or "monotone" */
int sn_op(const char* action, const char* params_json, char** report);

/* Message of the last failing call on this thread, "" if none. */
const char* sn_last_error(void);
void sn_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
