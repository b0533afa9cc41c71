"""Dictionary-based fuzzy keyword search over a trapdoor-keyed secure index."""
from .btree import BTree, BTreeNode, DuplicateKeyError
from .editdist import edit_distance, within_distance
from .fuzzyset import (
    BenchRow,
    DictFuzzySet,
    Dictionary,
    EmptyDictionaryError,
    WildcardFuzzySet,
    avg_set_sizes,
    dfs_expand,
    load_dictionary,
    load_dictionary_file,
    wfs_expand,
)
from .protocol import (
    Credentials,
    FormatError,
    ProtocolError,
    QueryRequest,
    QueryResult,
    QueryServer,
    TrapdoorQuery,
    deserialize_index,
    load_index,
    owner_publish,
    remote_answer,
    serialize_index,
    server_answer,
    user_decrypt,
    user_query,
)
from .secureindex import (
    DecryptionError,
    MalformedCiphertextError,
    PostingList,
    SecretKey,
    SecureIndex,
    Trapdoor,
    build_index,
    build_postings,
    decrypt_fid,
    derive_key,
    encrypt_fid,
    intersect,
    lookup,
    positions_of,
    trapdoor,
)
from .textprep import (
    DEFAULT_STOP_WORDS,
    Document,
    TextPrepConfig,
    Token,
    UnsupportedFormatError,
    extract_text,
    filter_stopwords,
    load_corpus,
    tokenize,
)

__version__ = "0.1.0"
