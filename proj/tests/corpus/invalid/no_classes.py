response = client.label_detection(image=image)
for obj in response.label_annotations:
    return obj.name
