response = client.analyze_sentiment(document=doc)
magnitude = response.document_sentiment.score
if -1.0 <= magnitude < -0.6:
    return True
return False
