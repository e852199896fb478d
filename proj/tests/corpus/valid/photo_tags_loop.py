People = ['person', 'face', 'crowd']
Pets = ['cat', 'dog']
Food = ['pizza', 'cake']
tags = []
response = client.label_detection(image=photo)
for obj in response.label_annotations:
  if obj.name in People:
    tags.append('People')
  if obj.name in Pets:
    tags.append('Pets')
  if obj.name in Food:
    tags.append('Food')
return tags
