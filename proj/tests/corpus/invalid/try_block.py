Recycle = ['glass']
response = client.label_detection(image=image)
labels = [o.name for o in response.label_annotations]
try:
    pass
except Exception:
    pass
