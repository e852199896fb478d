response = client.analyze_sentiment(document=doc)
s = response.document_sentiment.score
if s >= 0.5 and s <= 1:
    return 'great'
elif s > -0.5 and 0.5 > s:
    return 'okay'
return 'bad'
