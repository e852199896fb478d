Recycle = ['glass', 'paper']
response = client.label_detection(image=image)
top = response.label_annotations[0]
