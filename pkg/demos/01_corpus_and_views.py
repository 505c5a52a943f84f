# Loading a corpus and looking at it from both sides.
#
# Every example is a (comment, code snippet, label) triple. Downstream
# stages never touch the corpus directly; they work on a "view": either the
# comments alone, or each comment concatenated with its code snippet.

from commentclf import ViewMode, corpus_stats, extract_view
from commentclf.fixture import fixture_corpus_path, load_fixture_corpus

print(f"corpus file: {fixture_corpus_path()}")
corpus = load_fixture_corpus()

stats = corpus_stats(corpus)
print(f"examples:            {stats.example_count}")
for label, count in stats.class_counts.items():
    print(f"  {label.value:<10}       {count}")
print(f"mean comment tokens: {stats.mean_comment_tokens:.2f}")

# The two views have the same length and order; only the document text
# changes.
comments = extract_view(corpus, ViewMode.COMMENTS_ONLY)
both = extract_view(corpus, ViewMode.CODE_AND_COMMENTS)

print("\nfirst example, comments-only view:")
print(" ", comments.documents[0])
print("first example, code+comments view:")
for line in both.documents[0].splitlines():
    print(" ", line)
